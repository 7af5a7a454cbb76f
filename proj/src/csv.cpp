#include "cval/csv.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace cval {

Dataset read_csv(const std::string& path, bool has_header, bool class_column) {
    std::ifstream in(path);
    if (!in) throw InvalidDataError("cannot open " + path);

    std::vector<std::vector<double>> rows;
    std::vector<int> classes;
    std::string line;
    bool first = true;
    std::size_t ncols = 0;
    while (std::getline(in, line)) {
        if (first && has_header) {
            first = false;
            continue;
        }
        first = false;
        if (line.empty()) continue;
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                fields.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw InvalidDataError("non-numeric field in " + path + ": '" + tok + "'");
            }
        }
        if (fields.empty()) continue;
        if (ncols == 0)
            ncols = fields.size();
        else if (fields.size() != ncols)
            throw InvalidDataError("ragged CSV: row with " + std::to_string(fields.size()) + " fields");
        if (class_column) {
            classes.push_back(static_cast<int>(fields.back()));
            fields.pop_back();
        }
        rows.push_back(std::move(fields));
    }
    if (rows.size() < 2) throw InvalidDataError("need at least 2 rows");
    const std::size_t p = rows.front().size();
    if (p == 0) throw InvalidDataError("no feature columns");

    DataMatrix data(rows.size(), p);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < p; ++j) data(i, j) = rows[i][j];
    if (!data.all_finite()) throw InvalidDataError("non-finite value in " + path);

    Dataset ds{std::move(data), std::nullopt};
    if (class_column) ds.truth = Partition::from_raw_labels(classes);
    return ds;
}

}  // namespace cval
