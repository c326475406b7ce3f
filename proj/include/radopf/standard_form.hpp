#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace radopf {

enum class BlockKind { Free, NonNeg, Soc, Rsoc };

struct ConeSpan {
    BlockKind kind = BlockKind::Free;
    int size = 0;
};

struct Entry {
    int col = 0;
    double val = 0.0;
};

/// Conic program in standard form:
///     minimize    c'x + obj_constant
///     subject to  A x = b,   x in K
/// where K is the product of the blocks (kinds as in ConeSpan), partitioning
/// x in order. Soc blocks are x0 >= ||x1..||; Rsoc blocks are
/// 2 x0 x1 >= x2^2 + ... with x0, x1 >= 0.
struct StandardFormProgram {
    int num_vars = 0;
    std::vector<ConeSpan> blocks;
    std::vector<double> c;
    double obj_constant = 0.0;
    std::vector<std::vector<Entry>> rows;  // A, one sparse row per equality
    std::vector<double> rhs;               // b

    int num_rows() const { return static_cast<int>(rows.size()); }
    void validate() const;  // throws std::logic_error
};

/// Versioned text serialization; numbers round-trip bit-exactly.
void export_standard_form(const StandardFormProgram& program, const std::string& path);
StandardFormProgram import_standard_form(const std::string& path);

/// Membership checks with slack tolerance (used by tests and presolve).
bool in_soc(const double* v, int len, double tol = 0.0);
bool in_rsoc(const double* v, int len, double tol = 0.0);

/// Self-inverse linear isometry mapping the rotated cone
/// {2 x0 x1 >= ||x2..||^2} onto the standard cone {y0 >= ||y1..||}:
/// y0 = (x0+x1)/sqrt2, y1 = (x0-x1)/sqrt2, tail unchanged.
std::vector<double> rsoc_soc_isometry(const std::vector<double>& v);

}  // namespace radopf
