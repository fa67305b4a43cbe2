#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <string>

#include "json.hpp"

namespace distill {

// Calls `fn` for every non-blank line parsed as JSON. Parse failures and
// exceptions thrown by `fn` are rethrown as Error with "<source>:<line>"
// context (original code preserved).
void for_each_jsonl(std::istream& in, const std::string& source,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn);

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn);

// Writes `contents` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace distill
