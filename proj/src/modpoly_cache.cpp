#include <array>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "lambda_lab/error.hpp"
#include "lambda_lab/modpoly.hpp"

namespace lambda_lab {

const char *const kProducerVersion = "lambda_lab 1.0.0";

namespace {

constexpr const char *kMagic = "LAMBDA-MODPOLY v1 p=";
constexpr const char *kChecksumTag = "CHECKSUM ";

bool parse_unsigned(const std::string &s, unsigned &out) {
    if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos ||
        (s.size() > 1 && s[0] == '0')) {
        return false;
    }
    out = static_cast<unsigned>(std::stoul(s));
    return true;
}

bool is_decimal_integer(const std::string &s) {
    std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    return s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos;
}

} // namespace

std::string sha256_hex(const std::string &bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw InternalError("sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4U]);
        out.push_back(kHex[digest[i] & 0xFU]);
    }
    return out;
}

std::string serialize_modpoly(const BivarIntPoly &f) {
    std::string body = kMagic + std::to_string(f.p_level()) + "\n";
    for (const auto &[e, c] : f.terms()) {
        body += std::to_string(e.first) + " " + std::to_string(e.second) + " " + c.get_str() + "\n";
    }
    return body + kChecksumTag + sha256_hex(body) + "\n";
}

BivarIntPoly parse_modpoly(const std::string &text, unsigned expected_p) {
    const std::size_t tag = text.rfind(std::string("\n") + kChecksumTag);
    if (tag == std::string::npos) {
        throw CacheError("modpoly record: missing checksum line");
    }
    const std::string body = text.substr(0, tag + 1);
    std::string trailer = text.substr(tag + 1 + std::char_traits<char>::length(kChecksumTag));
    if (trailer.empty() || trailer.back() != '\n') {
        throw CacheError("modpoly record: truncated checksum line");
    }
    trailer.pop_back();
    if (trailer != sha256_hex(body)) {
        throw CacheError("modpoly record: checksum mismatch");
    }

    std::istringstream in(body);
    std::string line;
    std::getline(in, line);
    unsigned p = 0;
    if (line.rfind(kMagic, 0) != 0 || !parse_unsigned(line.substr(std::char_traits<char>::length(kMagic)), p)) {
        throw CacheError("modpoly record: bad header '" + line + "'");
    }
    if (p != expected_p) {
        throw CacheError("modpoly record: level " + std::to_string(p) + " where " + std::to_string(expected_p) +
                         " was expected");
    }
    BivarIntPoly f(p);
    bool have_prev = false;
    BivarIntPoly::Exponent prev{};
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string si, sj, sc, extra;
        unsigned i = 0, j = 0;
        if (!(fields >> si >> sj >> sc) || (fields >> extra) || !parse_unsigned(si, i) || !parse_unsigned(sj, j) ||
            !is_decimal_integer(sc)) {
            throw CacheError("modpoly record: malformed term line '" + line + "'");
        }
        const mpz_class c(sc);
        const BivarIntPoly::Exponent e{i, j};
        if (c == 0 || (have_prev && !(prev < e))) {
            throw CacheError("modpoly record: zero or out-of-order term '" + line + "'");
        }
        prev = e;
        have_prev = true;
        f.set(i, j, c);
    }
    if (!verify_monic_degree(f) || !verify_symmetry(f) || !verify_kronecker(f)) {
        throw CacheError("modpoly record for p=" + std::to_string(p) + " fails verification");
    }
    return f;
}

std::filesystem::path cache_path(const std::filesystem::path &dir, unsigned p) {
    return dir / ("Fp_" + std::to_string(p) + ".txt");
}

void cache_store(const BivarIntPoly &f, const std::filesystem::path &file) {
    std::error_code ec;
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path(), ec);
        if (ec) {
            throw CacheError("cannot create cache directory " + file.parent_path().string() + ": " + ec.message());
        }
    }
    std::filesystem::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw CacheError("cannot write " + tmp.string());
        }
        out << serialize_modpoly(f);
        if (!out.flush()) {
            throw CacheError("write to " + tmp.string() + " failed");
        }
    }
    std::filesystem::rename(tmp, file, ec);
    if (ec) {
        throw CacheError("cannot rename " + tmp.string() + ": " + ec.message());
    }
}

BivarIntPoly cache_load(unsigned p, const std::filesystem::path &file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw CacheError("cannot read " + file.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_modpoly(buf.str(), p);
}

} // namespace lambda_lab
