#include "pwschatten/io.hpp"

#include <charconv>
#include <sstream>

namespace pws {
namespace {

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

const char* kind_name(PointKind k) {
    switch (k) {
        case PointKind::UPlus: return "U+";
        case PointKind::UMinus: return "U-";
        case PointKind::LatticePoint: return "lattice";
    }
    return "?";
}

const char* basis_name(BasisKind k) {
    switch (k) {
        case BasisKind::Sinc: return "sinc";
        case BasisKind::ModulatedSinc: return "modulated_sinc";
        case BasisKind::WeightedDelta: return "weighted_delta";
    }
    return "?";
}

json basis_json(const BasisDescriptor& b) {
    return {{"kind", basis_name(b.kind)}, {"a", b.a},         {"shift", b.shift},
            {"modulation", b.modulation}, {"k_min", b.k_min}, {"k_max", b.k_max}};
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

json to_json(const LatticeFunction& f) {
    json vals = json::array();
    for (const auto& v : f.values()) vals.push_back(cplx_json(v));
    json tail;
    if (const auto* d = std::get_if<DecayTail>(&f.tail()))
        tail = {{"kind", "decay"}, {"C", d->C}, {"alpha", d->alpha}};
    else
        tail = {{"kind", "zero"}};
    return {{"a", f.lattice().a()}, {"shift", f.lattice().shift()}, {"k_min", f.k_min()}, {"values", vals},
            {"tail", tail}};
}

LatticeFunction lattice_function_from_json(const json& j) {
    std::vector<cplx> vals;
    for (const auto& v : j.at("values")) vals.push_back(cplx_from(v));
    Tail tail = ZeroTail{};
    if (j.contains("tail") && j["tail"].value("kind", "zero") == "decay")
        tail = DecayTail{j["tail"].at("C").get<double>(), j["tail"].at("alpha").get<double>()};
    return LatticeFunction(Lattice(j.at("a").get<double>(), j.value("shift", 0.0)), j.at("k_min").get<index_t>(),
                           std::move(vals), tail);
}

json to_json(const std::vector<StructuredPoint>& pts) {
    json out = json::array();
    for (const auto& p : pts) out.push_back({{"z", cplx_json(p.z)}, {"kind", kind_name(p.kind)}});
    return out;
}

json to_json(const SnapResult& s) {
    json mapping = json::array();
    for (const auto& [l, z] : s.mapping) mapping.push_back({{"from", cplx_json(l)}, {"to", cplx_json(z)}});
    return {{"snapped", to_json(s.snapped)}, {"mapping", mapping}, {"residual_bound_p", s.residual_bound_p}};
}

json to_json(const DenseOperator& op) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index k = 0; k < op.matrix.cols(); ++k) r.push_back(cplx_json(op.matrix(i, k)));
        rows.push_back(r);
    }
    return {{"matrix", rows},
            {"row_basis", basis_json(op.row_basis)},
            {"col_basis", basis_json(op.col_basis)},
            {"truncation_note", op.truncation_note},
            {"tail_bound", op.tail_bound}};
}

json to_json(const SingularSpectrum& s) { return {{"sigmas", s.sigmas}, {"rank_cutoff", s.rank_cutoff}}; }

json to_json(const AtomicSymbol& sym) {
    json atoms = json::array();
    for (const auto& at : sym.atoms) atoms.push_back({{"lambda", cplx_json(at.lambda)}, {"c", cplx_json(at.c)}});
    return {{"a", sym.a}, {"atoms", atoms}};
}

AtomicSymbol atomic_symbol_from_json(const json& j) {
    AtomicSymbol sym{j.at("a").get<double>(), {}};
    for (const auto& at : j.at("atoms")) sym.atoms.push_back({cplx_from(at.at("lambda")), cplx_from(at.at("c"))});
    return sym;
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> header)
    : out_(path), columns_(header.size()) {
    if (!out_) throw Error("cannot open " + path + " for writing");
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("CSV row width differs from the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

std::string points_to_csv(const std::vector<StructuredPoint>& pts) {
    std::ostringstream os;
    os << "re,im,kind\n";
    for (const auto& p : pts) os << format_double(p.z.real()) << ',' << format_double(p.z.imag()) << ',' << kind_name(p.kind) << '\n';
    return os.str();
}

}  // namespace pws
