#pragma once

#include "yamabe/charges.hpp"
#include "yamabe/geometry.hpp"
#include "yamabe/minkowski.hpp"
#include "yamabe/polycos.hpp"
#include "yamabe/series.hpp"
#include "yamabe/verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace yamabe {

using Json = nlohmann::ordered_json;

/// Shortest decimal form that round-trips a double ("%.17g").
std::string decimal(double x);

/// ["num/den", ...], coefficient i first.
Json to_json(const PolyCos& p);
PolyCos polycos_from_json(const Json& j);

/// {"n", "beta", "gamma", "K", "coefficients"}; lossless.
Json to_json(const SeriesSolution& sol);
/// Throws std::invalid_argument on malformed input or when K does not match
/// the coefficient count.
SeriesSolution solution_from_json(const Json& j);

/// [p_0, ..., p_n] as decimal strings.
Json to_json(const EMVector& p);
EMVector em_from_json(const Json& j);

Json to_json(const FluxReport& rep);
Json to_json(const BoundReport& rep);
Json to_json(const MassAspectFit& fit);
Json to_json(const DecayFit& fit);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& j);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Whitespace-separated columns with a '#' header line.
void write_columns(std::ostream& out, const std::string& header, const std::vector<std::vector<double>>& columns);

}  // namespace yamabe
