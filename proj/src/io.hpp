#pragma once

#include "bases.hpp"
#include "counterexamples.hpp"
#include "fibers.hpp"
#include "models.hpp"
#include "nfold.hpp"
#include "sampler.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace fibertool {

// 4ti2 matrix files: "rows cols" followed by the entries row by row.
void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);

/// Moves as the rows of a 4ti2 matrix ("N D").
void write_moves(std::ostream& os, const MoveSet& moves);
MoveSet read_moves(std::istream& is, std::shared_ptr<const DesignMatrix> model = nullptr,
                   MoveRole role = MoveRole::imported);

/// One 1-based multi-index per line, entries separated by blanks or commas; '#' starts a comment.
std::vector<std::size_t> read_cell_set(std::istream& is, const Dims& dims);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

nlohmann::json to_json(const Model& model);
nlohmann::json to_json(const MoveSet& moves, const DesignMatrix* model = nullptr);
nlohmann::json to_json(const ConnectivityReport& report, bool include_points = false);
nlohmann::json to_json(const PValue& p);
nlohmann::json to_json(const AcceptanceReport& report);
nlohmann::json to_json(const Thm41Certificate& c);
nlohmann::json to_json(const AntiStaircaseCertificate& c);
nlohmann::json to_json(const ThetaGadget& g);
nlohmann::json to_json(const Matrix& m);

inline std::string to_decimal(const BigInt& v) { return v.str(); }

}  // namespace fibertool
