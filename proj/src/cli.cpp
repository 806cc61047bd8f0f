#include "lambda_lab/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lambda_lab/error.hpp"
#include "lambda_lab/finite_field.hpp"
#include "lambda_lab/padic.hpp"
#include "lambda_lab/pairing.hpp"
#include "lambda_lab/primes.hpp"

namespace lambda_lab::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::string pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

std::string format_signs(const std::vector<int> &signs) {
    std::string s = "[";
    for (std::size_t i = 0; i < signs.size(); ++i) {
        s += (i ? ", " : "") + std::string(signs[i] > 0 ? "+1" : "-1");
    }
    return s + "]";
}

std::string join_elements(const std::vector<Fp2Elem> &xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (i ? ", " : "") + to_string(xs[i]);
    }
    return s;
}

std::string format_twice_val(int tv) { return tv % 2 == 0 ? std::to_string(tv / 2) : std::to_string(tv) + "/2"; }

void require_prime(unsigned p, unsigned minimum, const std::string &what) {
    if (p < minimum || !is_prime(p)) {
        throw InvalidArgument(what + ": p must be a prime >= " + std::to_string(minimum) + ", got " + std::to_string(p));
    }
}

void require_3_mod_4(unsigned p, const std::string &what) {
    require_prime(p, 7, what);
    if (p % 4 != 3) {
        throw InvalidArgument(what + ": p must be 3 mod 4, got " + std::to_string(p));
    }
}

// Each check lambda returns {passed, observed}; exceptions from the library
// become failed checks carrying the message as the observed value.
template <typename Fn>
void run_check(RunReport &report, const std::string &name, const std::string &expected, Fn &&fn) {
    CheckEntry entry{name, false, "", expected};
    try {
        auto [ok, observed] = fn();
        entry.passed = ok;
        entry.observed = std::move(observed);
    } catch (const Error &e) {
        entry.observed = std::string("error: ") + e.what();
    }
    report.checks.push_back(std::move(entry));
}

int cmd_modpoly(unsigned p, const std::string &format, const ModpolySource &source, std::ostream &out) {
    require_prime(p, 3, "modpoly");
    const BivarIntPoly f = obtain_modpoly(p, source);
    const bool sym = verify_symmetry(f);
    const bool kron = verify_kronecker(f);
    const bool monic = verify_monic_degree(f);
    const bool ok = sym && kron && monic;
    if (format == "json") {
        nlohmann::ordered_json j;
        j["p"] = p;
        nlohmann::ordered_json coeffs = nlohmann::ordered_json::object();
        for (const auto &[e, c] : f.terms()) {
            coeffs[std::to_string(e.first) + "," + std::to_string(e.second)] = c.get_str();
        }
        j["coeffs"] = std::move(coeffs);
        j["checks"] = {{"symmetry", sym}, {"kronecker", kron}, {"monic_degree", monic}};
        out << j.dump(2) << "\n";
    } else {
        out << "F_" << p << "(X,Y): " << f.term_count() << " nonzero terms\n";
        for (const auto &[e, c] : f.terms()) {
            out << "  X^" << e.first << " Y^" << e.second << " : " << c.get_str() << "\n";
        }
        out << "symmetry: " << pass_fail(sym) << "\nkronecker: " << pass_fail(kron)
            << "\nmonic_degree: " << pass_fail(monic) << "\n";
    }
    return ok ? kSuccess : kVerificationFailure;
}

int cmd_ss(unsigned p, std::ostream &out) {
    require_prime(p, 5, "ss");
    const SupersingularSet s = supersingular_lambdas(p);
    out << join_elements(s.lambdas) << " (" << s.count_in_prime_field() << " of " << s.size() << " in F_p)\n";
    if (s.count_in_prime_field() != s.size()) {
        out << "where s^2 = " << smallest_nonresidue(p) << "\n";
    }
    return kSuccess;
}

int cmd_classnum(unsigned p, std::ostream &out) {
    require_3_mod_4(p, "classnum");
    const SupersingularSet s = supersingular_lambdas(p);
    const ClassNumberCheck c = count_check_3h(p, s);
    out << "h(-" << p << ") = " << c.h << "; |S ∩ F_p| = " << c.in_prime_field
        << (c.passed ? " = 3h ✓" : " ≠ 3h ✗") << "\n";
    return c.passed ? kSuccess : kVerificationFailure;
}

int cmd_cmlift(unsigned p, unsigned lambda0, int prec, const ModpolySource &source, std::ostream &out) {
    require_3_mod_4(p, "cmlift");
    if (lambda0 >= p) {
        throw InvalidArgument("cmlift: lambda0 must be a residue in [0, p)");
    }
    if (prec < 4) {
        throw InvalidArgument("cmlift: --prec must be at least 4");
    }
    const BivarIntPoly f = obtain_modpoly(p, source);
    const UnivarIntPoly diag = diag_polynomial(f);
    const CmLift first = cm_lift(diag, p, lambda0, prec, 0);
    const CmLift second = cm_lift(diag, p, lambda0, prec, 1);
    const bool conjugate = second.lambda.agrees_with(first.lambda.conjugate());
    const bool distinct = !second.lambda.agrees_with(first.lambda);
    const Thm3Report t1 = verify_thm3(f, first.lambda, p);
    const Thm3Report t2 = verify_thm3(f, second.lambda, p);
    out << "lambda_1 = " << to_string(first.lambda) << "\n";
    out << "lambda_2 = " << to_string(second.lambda) << "\n";
    out << "conjugate: " << (conjugate && distinct ? "yes" : "no") << "\n";
    out << "newton_steps: " << first.newton_steps << ", " << second.newton_steps << "\n";
    out << "residual_valuation: " << format_twice_val(first.residual_twice_val) << ", "
        << format_twice_val(second.residual_twice_val) << "\n";
    for (const auto *t : {&t1, &t2}) {
        out << "v(F(l, l^p)) = " << format_twice_val(t->twice_val_value) << ", v(l - l^p) = "
            << format_twice_val(t->twice_val_diff) << ", v(F(l, l^p) - (l - l^p)^2) = "
            << format_twice_val(t->twice_val_gap) << "\n";
    }
    const bool ok = conjugate && distinct && t1.passed && t2.passed;
    out << "thm3: " << pass_fail(ok) << "\n";
    return ok ? kSuccess : kVerificationFailure;
}

int cmd_pairing(unsigned p, const ModpolySource &source, std::ostream &out) {
    require_prime(p, 5, "pairing");
    const BivarIntPoly f = obtain_modpoly(p, source);
    const SupersingularSet s = supersingular_lambdas(p);
    const PairingMatrix m = build_pairing_matrix(f, s);
    out << "lambdas: " << join_elements(m.lambdas) << "\n";
    for (const auto &row : m.entries) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j ? " " : "") << to_string(row[j]);
        }
        out << "\n";
    }
    out << "signs: " << format_signs(m.signs) << "\n";
    out << "corollary_signs: " << format_signs(m.corollary_signs) << "\n";
    out << "symmetric: " << (m.is_symmetric() ? "yes" : "no") << "\n";
    return m.is_symmetric() ? kSuccess : kVerificationFailure;
}

} // namespace

bool RunReport::passed() const {
    for (const auto &c : checks) {
        if (!c.passed) {
            return false;
        }
    }
    return true;
}

std::string RunReport::to_text(bool include_timing) const {
    std::ostringstream os;
    os << "command: " << command << "\n";
    os << "p: " << p << "\n";
    os << "producer: " << kProducerVersion << "\n";
    for (const auto &c : checks) {
        os << "check " << c.name << ": " << pass_fail(c.passed);
        if (!c.observed.empty()) {
            os << " observed=" << c.observed;
        }
        if (!c.passed) {
            os << " expected=" << c.expected;
        }
        os << "\n";
    }
    for (const auto &[k, v] : details) {
        os << k << ": " << v << "\n";
    }
    os << "result: " << pass_fail(passed()) << "\n";
    if (include_timing) {
        os << "timing_ms: " << static_cast<long long>(seconds * 1000.0) << "\n";
    }
    return os.str();
}

BivarIntPoly obtain_modpoly(unsigned p, const ModpolySource &source) {
    if (source.cache_dir) {
        const auto file = cache_path(*source.cache_dir, p);
        if (std::filesystem::exists(file)) {
            return cache_load(p, file);
        }
    }
    BivarIntPoly f = compute_modpoly(p, source.options);
    if (source.cache_dir) {
        cache_store(f, cache_path(*source.cache_dir, p));
    }
    return f;
}

RunReport verify_report(unsigned p, const ModpolySource &source) {
    require_prime(p, 5, "verify");
    const auto start = Clock::now();
    RunReport r;
    r.command = "verify";
    r.p = p;
    const BivarIntPoly f = obtain_modpoly(p, source);

    run_check(r, "monic_degree", "coeff(p+1,0) = coeff(0,p+1) = 1, degree p+1 in X and Y", [&] {
        return std::pair{verify_monic_degree(f), "deg_X=" + std::to_string(f.degree_x()) +
                                                     " deg_Y=" + std::to_string(f.degree_y())};
    });
    run_check(r, "symmetry", "F(X,Y) = F(Y,X)", [&] { return std::pair{verify_symmetry(f), std::string()}; });
    run_check(r, "kronecker", "F = (X^p - Y)(X - Y^p) mod p",
              [&] { return std::pair{verify_kronecker(f), std::string()}; });
    run_check(r, "diag_congruence", "F(X,X) = -(X^p - X)^2 mod p", [&] {
        const UnivarIntPoly d = diag_polynomial(f);
        return std::pair{true, "deg=" + std::to_string(d.degree())};
    });

    std::optional<FpPoly> rbar;
    run_check(r, "r_integrality", "p divides F(X, X^p)", [&] {
        const UnivarIntPoly big_r = r_polynomial(f);
        rbar = FpPoly::reduce(big_r, p);
        return std::pair{true, "deg R=" + std::to_string(big_r.degree())};
    });

    std::optional<SupersingularSet> s;
    run_check(r, "supersingular_census", std::to_string((p - 1) / 2) + " roots, Frobenius-closed, oracle agreement",
              [&] {
                  s = supersingular_lambdas(p);
                  const bool ok = s->size() == (p - 1) / 2 && s->frobenius_closed();
                  return std::pair{ok, std::to_string(s->size()) + " roots, " +
                                           std::to_string(s->count_in_prime_field()) + " in F_p"};
              });
    if (s) {
        r.details.emplace_back("supersingular", join_elements(s->lambdas));
    }

    if (rbar && s) {
        std::vector<int> signs;
        run_check(r, "corollary", "Rbar(l_i) = +-(-1)^((p-1)/2) prod (l_i - l_k)^-(p+1), + unless p = 3 mod 4 and l_i not in F_p",
                  [&] {
                      const CorollaryReport c = corollary_check(p, *rbar, *s);
                      signs = c.signs();
                      return std::pair{true, format_signs(signs)};
                  });
        if (!signs.empty()) {
            r.details.emplace_back("signs", format_signs(signs));
        }
        VanishingReport v;
        run_check(r, "ordinary_vanishing", "Rbar = 0 on every ordinary lambda in F_p^2 \\ {0,1}", [&] {
            v = ordinary_vanishing_check(p, *rbar, *s);
            return std::pair{v.passed, std::to_string(v.scanned - v.nonvanishing.size()) + "/" +
                                           std::to_string(v.scanned) + " vanish"};
        });
        r.details.emplace_back("rbar_at_0", to_string(v.at_zero));
        r.details.emplace_back("rbar_at_1", to_string(v.at_one));
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Lambda modular polynomials, supersingular invariants and their congruences", "lambda_lab"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string cache_dir;
    bool no_cache = false;
    unsigned jobs = 1;
    app.add_option("--cache-dir", cache_dir, "Directory of cached F_p records (LAMBDA_LAB_CACHE overrides)");
    app.add_flag("--no-cache", no_cache, "Always recompute F_p");
    app.add_option("--jobs", jobs, "Worker threads for the modular solves")->check(CLI::PositiveNumber);

    unsigned p = 0;
    unsigned lambda0 = 0;
    std::int64_t precision = 0;
    int lift_prec = 20;
    std::string format = "text";

    auto *modpoly = app.add_subcommand("modpoly", "Compute and verify F_p");
    modpoly->add_option("p", p, "Odd prime level")->required();
    modpoly->add_option("--precision", precision, "Series terms for the linear system");
    modpoly->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    auto *verify = app.add_subcommand("verify", "Run every congruence check for F_p");
    verify->add_option("p", p, "Prime >= 5")->required();

    auto *ss = app.add_subcommand("ss", "List supersingular lambda-invariants");
    ss->add_option("p", p, "Prime >= 5")->required();

    auto *classnum = app.add_subcommand("classnum", "Class number h(-p) and the 3h count");
    classnum->add_option("p", p, "Prime = 3 mod 4")->required();

    auto *cmlift = app.add_subcommand("cmlift", "CM lifts of a supersingular lambda in F_p");
    cmlift->add_option("p", p, "Prime = 3 mod 4")->required();
    cmlift->add_option("lambda0", lambda0, "Supersingular residue")->required();
    cmlift->add_option("--prec", lift_prec, "Target p-adic precision");

    auto *pairing = app.add_subcommand("pairing", "Residual pairing matrix");
    pairing->add_option("p", p, "Prime >= 5")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    ModpolySource source;
    source.options.jobs = jobs;
    source.options.precision = precision;
    if (const char *env = std::getenv("LAMBDA_LAB_CACHE"); env != nullptr && *env != '\0') {
        cache_dir = env;
    }
    if (!cache_dir.empty() && !no_cache) {
        source.cache_dir = cache_dir;
    }

    try {
        if (*modpoly) {
            return cmd_modpoly(p, format, source, out);
        }
        if (*verify) {
            const RunReport report = verify_report(p, source);
            out << report.to_text();
            return report.passed() ? kSuccess : kVerificationFailure;
        }
        if (*ss) {
            return cmd_ss(p, out);
        }
        if (*classnum) {
            return cmd_classnum(p, out);
        }
        if (*cmlift) {
            return cmd_cmlift(p, lambda0, lift_prec, source, out);
        }
        if (*pairing) {
            return cmd_pairing(p, source, out);
        }
    } catch (const InvalidArgument &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const CacheError &e) {
        err << "cache error: " << e.what() << "\n";
        return kEnvironmentError;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "cache error: " << e.what() << "\n";
        return kEnvironmentError;
    } catch (const Error &e) {
        err << "verification failure: " << e.what() << "\n";
        return kVerificationFailure;
    }
    return kUsageError;
}

} // namespace lambda_lab::cli
