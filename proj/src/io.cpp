#include "ripshom/io.hpp"

#include <fstream>
#include <sstream>

namespace ripshom {

MetricPoints points_from_json(const Json& doc, double tol) {
    if (doc.contains("points")) {
        std::vector<std::vector<double>> coords;
        for (const auto& row : doc.at("points")) coords.push_back(row.get<std::vector<double>>());
        return MetricPoints::from_euclidean(coords);
    }
    if (doc.contains("dist")) {
        std::vector<std::string> labels;
        if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<std::string>>();
        std::vector<std::vector<double>> dist;
        for (const auto& row : doc.at("dist")) dist.push_back(row.get<std::vector<double>>());
        return MetricPoints::from_distance_matrix(std::move(labels), dist, tol);
    }
    throw validation_error("points_from_json: expected a \"points\" or \"dist\" key");
}

MetricPoints points_from_csv(const std::string& text) {
    std::vector<std::vector<double>> coords;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw validation_error("points_from_csv: non-numeric cell '" + cell + "'");
            }
        }
        coords.push_back(std::move(row));
    }
    return MetricPoints::from_euclidean(coords);
}

MetricPoints load_points(const std::filesystem::path& path, double tol) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open input file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (path.extension() == ".json") {
        Json doc = Json::parse(buffer.str());
        return points_from_json(doc, tol);
    }
    return points_from_csv(buffer.str());
}

Json complex_to_json(const BifilteredComplex& complex) {
    Json doc;
    doc["dim_cap"] = complex.dim_cap();
    doc["deg_cap"] = complex.deg_cap();
    Json simplices = Json::array();
    for (const auto& e : complex.entries()) {
        Json item;
        item["v"] = e.simplex.v;
        item["rips"] = e.rips_birth;
        Json deg = Json::array();
        for (const auto& b : e.degree_births) {
            if (b)
                deg.push_back(*b);
            else
                deg.push_back(nullptr);
        }
        item["deg"] = std::move(deg);
        simplices.push_back(std::move(item));
    }
    doc["simplices"] = std::move(simplices);
    return doc;
}

Json certificate_to_json(const InterleavingCertificate& cert) {
    Json doc;
    doc["r"] = cert.r;
    doc["k"] = cert.k;
    doc["hypothesis"] = "ok";  // construction throws otherwise
    Json grid = Json::array();
    for (const auto& check : cert.checks) {
        Json item;
        item["s"] = check.s;
        item["theta_lands"] = check.theta_lands;
        item["upper"] = check.upper_commutes;
        item["union"] = check.union_witness;
        grid.push_back(std::move(item));
    }
    doc["grid"] = std::move(grid);
    doc["overall"] = cert.overall;
    return doc;
}

Json abelian_to_json(const AbelianInvariants& inv) {
    Json doc;
    doc["free_rank"] = inv.free_rank;
    doc["torsion"] = inv.torsion;
    return doc;
}

Json set_system_to_json(const SetSystem& sys) {
    Json doc;
    doc["grid"] = sys.grid.values;
    doc["sizes"] = sys.sizes;
    doc["steps"] = sys.steps;
    return doc;
}

SetSystem set_system_from_json(const Json& doc) {
    SetSystem sys;
    sys.grid.values = doc.at("grid").get<std::vector<double>>();
    sys.sizes = doc.at("sizes").get<std::vector<int>>();
    sys.steps = doc.at("steps").get<std::vector<std::vector<int>>>();
    sys.validate();
    return sys;
}

SetSystemMap set_system_map_from_json(const Json& doc) {
    return SetSystemMap(set_system_from_json(doc.at("source")),
                        set_system_from_json(doc.at("target")),
                        doc.at("levels").get<std::vector<std::vector<int>>>());
}

namespace {

Json matrix_to_json(const FpMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

FpMatrix matrix_from_json(const Json& doc, int rows, int cols, int p) {
    FpMatrix m(rows, cols, p);
    if (static_cast<int>(doc.size()) != rows)
        throw validation_error("matrix_from_json: wrong row count");
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(doc[i].size()) != cols)
            throw validation_error("matrix_from_json: wrong column count");
        for (int j = 0; j < cols; ++j) m.set(i, j, doc[i][j].get<long long>());
    }
    return m;
}

}  // namespace

Json vec_system_to_json(const VecSystem& sys) {
    Json doc;
    doc["grid"] = sys.grid.values;
    doc["p"] = sys.p;
    doc["dims"] = sys.dims;
    Json steps = Json::array();
    for (const auto& step : sys.steps) steps.push_back(matrix_to_json(step));
    doc["steps"] = std::move(steps);
    return doc;
}

VecSystem vec_system_from_json(const Json& doc) {
    VecSystem sys;
    sys.grid.values = doc.at("grid").get<std::vector<double>>();
    sys.p = doc.at("p").get<int>();
    sys.dims = doc.at("dims").get<std::vector<int>>();
    const auto& steps = doc.at("steps");
    for (std::size_t i = 0; i + 1 < sys.dims.size(); ++i)
        sys.steps.push_back(matrix_from_json(steps.at(i), sys.dims[i + 1], sys.dims[i], sys.p));
    sys.validate();
    return sys;
}

VecSystemMap vec_system_map_from_json(const Json& doc) {
    VecSystem source = vec_system_from_json(doc.at("source"));
    VecSystem target = vec_system_from_json(doc.at("target"));
    std::vector<FpMatrix> levels;
    const auto& raw = doc.at("levels");
    for (std::size_t i = 0; i < source.dims.size(); ++i)
        levels.push_back(matrix_from_json(raw.at(i), target.dims[i], source.dims[i], source.p));
    return VecSystemMap(std::move(source), std::move(target), std::move(levels));
}

Json verdict_to_json(const RIsoVerdict& verdict, double r) {
    Json doc;
    doc["r"] = r;
    doc["mono"] = verdict.mono;
    doc["epi"] = verdict.epi;
    if (verdict.failure) {
        Json witness;
        witness["s"] = verdict.failure->s;
        witness["condition"] = verdict.failure->condition;
        witness["elements"] = verdict.failure->elements;
        doc["witness_failure"] = std::move(witness);
    }
    return doc;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw validation_error("cannot open output file: " + tmp);
        out << contents;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace ripshom
