#include "wpl/manifest.hpp"

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <fmt/format.h>
#include <openssl/evp.h>

#ifndef WPL_VERSION
#define WPL_VERSION "0.0.0"
#endif

namespace wpl {

namespace {

class Sha256 {
  public:
    Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("sha256 init failed");
        }
    }

    void update(const char* data, std::size_t size) {
        if (EVP_DigestUpdate(ctx_.get(), data, size) != 1) {
            throw std::runtime_error("sha256 update failed");
        }
    }

    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx_.get(), digest.data(), &len) != 1) {
            throw std::runtime_error("sha256 final failed");
        }
        std::string out;
        for (unsigned int i = 0; i < len; ++i) {
            out += fmt::format("{:02x}", digest[i]);
        }
        return out;
    }

  private:
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    Sha256 h;
    h.update(bytes.data(), bytes.size());
    return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot read {}", path.string()));
    }
    Sha256 h;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

std::string library_version() {
    return WPL_VERSION;
}

nlohmann::json make_manifest(const std::vector<std::string>& command_line, const nlohmann::json& config,
                             const std::vector<std::filesystem::path>& outputs) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& p : outputs) {
        files.push_back({{"path", p.filename().string()}, {"sha256", sha256_file(p)},
                         {"bytes", std::filesystem::file_size(p)}});
    }
    return {{"version", library_version()}, {"command", command_line}, {"config", config}, {"outputs", files}};
}

}  // namespace wpl
