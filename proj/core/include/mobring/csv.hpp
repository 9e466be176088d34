#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mobring {

using CsvCell = std::variant<double, std::int64_t, std::string>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvCell>> rows;

    /// Throws ValidationError if the row width differs from the header.
    void add_row(std::vector<CsvCell> row);
};

/// Shortest-safe decimal for doubles: "%.17g", so parsing recovers the value
/// bit for bit.
std::string format_double(double value);

/// Header first, '\n' line endings, fields quoted only when they contain a
/// comma, quote or newline.
std::string emit_csv(const CsvTable& table);

/// Splits CSV text into raw fields, honouring quotes. Header is row 0.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

inline const std::vector<std::string> kTrajectoryHeader{"t_xi",      "t_ps",  "p_photon", "p_acceptor",
                                                        "p_donors",  "norm2", "eta_cum",  "loss_cum"};
inline const std::vector<std::string> kSweepHeader{"delta", "detuning", "eta", "converged"};
inline const std::vector<std::string> kSpectrumHeader{"m", "k", "eps_k"};
inline const std::vector<std::string> kCouplingHeader{"m", "k", "abs_h_a", "abs_h_b"};

}  // namespace mobring
