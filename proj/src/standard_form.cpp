#include "radopf/standard_form.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "radopf/io_util.hpp"

namespace radopf {

void StandardFormProgram::validate() const {
    int total = 0;
    for (const ConeSpan& blk : blocks) {
        if (blk.size <= 0) throw std::logic_error("standard form: empty block");
        if (blk.kind == BlockKind::Soc && blk.size < 2)
            throw std::logic_error("standard form: soc block needs dimension >= 2");
        if (blk.kind == BlockKind::Rsoc && blk.size < 3)
            throw std::logic_error("standard form: rsoc block needs dimension >= 3");
        total += blk.size;
    }
    if (total != num_vars) throw std::logic_error("standard form: blocks do not partition x");
    if (static_cast<int>(c.size()) != num_vars) throw std::logic_error("standard form: bad objective size");
    if (rows.size() != rhs.size()) throw std::logic_error("standard form: row/rhs mismatch");
    for (const auto& row : rows)
        for (const Entry& e : row)
            if (e.col < 0 || e.col >= num_vars) throw std::logic_error("standard form: column out of range");
}

bool in_soc(const double* v, int len, double tol) {
    double norm = 0.0;
    for (int i = 1; i < len; ++i) norm += v[i] * v[i];
    return v[0] >= std::sqrt(norm) - tol;
}

bool in_rsoc(const double* v, int len, double tol) {
    if (v[0] < -tol || v[1] < -tol) return false;
    double sq = 0.0;
    for (int i = 2; i < len; ++i) sq += v[i] * v[i];
    return 2.0 * v[0] * v[1] >= sq - tol;
}

std::vector<double> rsoc_soc_isometry(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("isometry needs at least two components");
    const double inv_sqrt2 = 0.7071067811865475244;
    std::vector<double> out = v;
    out[0] = (v[0] + v[1]) * inv_sqrt2;
    out[1] = (v[0] - v[1]) * inv_sqrt2;
    return out;
}

namespace {

const char* block_name(BlockKind kind) {
    switch (kind) {
        case BlockKind::Free: return "free";
        case BlockKind::NonNeg: return "nonneg";
        case BlockKind::Soc: return "soc";
        case BlockKind::Rsoc: return "rsoc";
    }
    return "?";
}

}  // namespace

void export_standard_form(const StandardFormProgram& program, const std::string& path) {
    program.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "radopf-sfp v1\n";
    out << "vars " << program.num_vars << "\n";
    out << "objconst " << fmt_double(program.obj_constant) << "\n";
    out << "obj";
    for (double ci : program.c) out << " " << fmt_double(ci);
    out << "\n";
    out << "blocks " << program.blocks.size() << "\n";
    for (const ConeSpan& blk : program.blocks) out << block_name(blk.kind) << " " << blk.size << "\n";
    out << "rows " << program.rows.size() << "\n";
    for (size_t i = 0; i < program.rows.size(); ++i) {
        out << "row " << program.rows[i].size() << " " << fmt_double(program.rhs[i]);
        for (const Entry& e : program.rows[i]) out << " " << e.col << " " << fmt_double(e.val);
        out << "\n";
    }
    out << "end\n";
}

StandardFormProgram import_standard_form(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    auto fail = [&path](const std::string& msg) -> void {
        throw std::runtime_error(path + ": " + msg);
    };
    std::string line;
    if (!std::getline(in, line)) fail("empty file");
    if (line != "radopf-sfp v1") fail("schema-version mismatch: expected 'radopf-sfp v1', got '" + line + "'");
    StandardFormProgram p;
    std::string tok;
    auto expect = [&](std::istream& s, const char* kw) {
        s >> tok;
        if (tok != kw) fail(std::string("expected '") + kw + "', got '" + tok + "'");
    };
    expect(in, "vars");
    in >> p.num_vars;
    expect(in, "objconst");
    in >> tok;
    p.obj_constant = std::strtod(tok.c_str(), nullptr);
    expect(in, "obj");
    p.c.resize(static_cast<size_t>(p.num_vars));
    for (double& ci : p.c) {
        in >> tok;
        ci = std::strtod(tok.c_str(), nullptr);
    }
    expect(in, "blocks");
    size_t nblocks = 0;
    in >> nblocks;
    for (size_t i = 0; i < nblocks; ++i) {
        std::string kind;
        int size = 0;
        in >> kind >> size;
        ConeSpan span;
        span.size = size;
        if (kind == "free") span.kind = BlockKind::Free;
        else if (kind == "nonneg") span.kind = BlockKind::NonNeg;
        else if (kind == "soc") span.kind = BlockKind::Soc;
        else if (kind == "rsoc") span.kind = BlockKind::Rsoc;
        else fail("unknown block kind '" + kind + "'");
        p.blocks.push_back(span);
    }
    expect(in, "rows");
    size_t nrows = 0;
    in >> nrows;
    p.rows.resize(nrows);
    p.rhs.resize(nrows);
    for (size_t i = 0; i < nrows; ++i) {
        expect(in, "row");
        size_t nnz = 0;
        in >> nnz >> tok;
        p.rhs[i] = std::strtod(tok.c_str(), nullptr);
        p.rows[i].resize(nnz);
        for (Entry& e : p.rows[i]) {
            in >> e.col >> tok;
            e.val = std::strtod(tok.c_str(), nullptr);
        }
    }
    expect(in, "end");
    if (!in) fail("truncated file");
    p.validate();
    return p;
}

}  // namespace radopf
