#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwschatten/decomposition.hpp"
#include "pwschatten/kernels.hpp"
#include "pwschatten/operators.hpp"
#include "pwschatten/spectrum.hpp"

namespace pws {

using json = nlohmann::json;

/// Shortest text that reads back to the same double.
std::string format_double(double x);

/// Stored window only; a sampler is not serialized and the tail is kept.
json to_json(const LatticeFunction& f);
LatticeFunction lattice_function_from_json(const json& j);

json to_json(const std::vector<StructuredPoint>& pts);
json to_json(const SnapResult& s);
json to_json(const DenseOperator& op);
json to_json(const SingularSpectrum& s);
json to_json(const AtomicSymbol& sym);
AtomicSymbol atomic_symbol_from_json(const json& j);

/// Comma-separated rows with a fixed header; numbers go through format_double.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::vector<std::string> header);

    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t columns_;
};

std::string points_to_csv(const std::vector<StructuredPoint>& pts);

}  // namespace pws
