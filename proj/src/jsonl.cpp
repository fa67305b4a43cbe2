#include "distill/jsonl.hpp"

#include <fstream>

#include "distill/error.hpp"

namespace distill {

void for_each_jsonl(std::istream& in, const std::string& source,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::ParseError,
                  source + ":" + std::to_string(lineno) + ": " + e.what());
    }
    try {
      fn(doc, lineno);
    } catch (const Error& e) {
      throw Error(e.code(), source + ":" + std::to_string(lineno) + ": " + e.detail());
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::ParseError,
                  source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  for_each_jsonl(in, path.string(), fn);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error(Errc::IoError, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace distill
