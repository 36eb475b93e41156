#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "orbicert/arrangement.hpp"
#include "orbicert/fermat.hpp"
#include "orbicert/matrix.hpp"
#include "orbicert/mpoly.hpp"

namespace orbicert {

using Json = nlohmann::json;  // std::map-backed: keys serialize sorted

/// Two-space indented dump with a trailing newline. Identical values give
/// identical bytes.
std::string canonical_dump(const Json& j);

std::string sha256_hex(std::string_view bytes);

Json to_json(const Rational& q);
Json to_json(const RationalMatrix& m);
Json to_json(const Covector& v);
Json to_json(const Multiplicity& m);
/// Terms largest first: [{"coefficient": "3/2", "exponents": {"z1": 2, "z3'": 1}}, ...]
Json to_json(const MPoly& f);
Json to_json(const Arrangement& arr);
Json to_json(const NormalizedArrangement& na);
Json to_json(const FermatCover& cov);

/// All parsers throw InputError with a path-like hint on malformed input.
Rational rational_from_json(const Json& j);
RationalMatrix matrix_from_json(const Json& j);
Multiplicity multiplicity_from_json(const Json& j);
Arrangement arrangement_from_json(const Json& j);
FermatCover cover_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
Arrangement read_arrangement(const std::filesystem::path& path);

}  // namespace orbicert
