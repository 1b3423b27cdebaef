#include "latgauss/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "latgauss/coset.hpp"

namespace latgauss {

Basis::Basis(RatMat rows) {
    vectors = std::move(rows);
    if (vectors.empty()) throw degenerate_basis_error("empty basis");
    const size_t n = vectors.size();
    for (const auto& v : vectors)
        if (v.size() != n) throw degenerate_basis_error("basis must be square and full rank");
    RationalGS gs = rational_gram_schmidt(*this);
    for (const auto& q : gs.gs_norm2)
        if (q == 0) throw degenerate_basis_error();
}

RationalGS rational_gram_schmidt(const Lattice& L) {
    const int r = L.rank();
    RationalGS out;
    out.gs.resize(r);
    out.mu.assign(r, RatVec(r, Rat(0)));
    out.gs_norm2.resize(r);
    for (int i = 0; i < r; ++i) {
        RatVec v = L.vectors[i];
        for (int j = 0; j < i; ++j) {
            if (out.gs_norm2[j] == 0) { out.mu[i][j] = 0; continue; }
            Rat m = dot(L.vectors[i], out.gs[j]) / out.gs_norm2[j];
            out.mu[i][j] = m;
            axpy(v, -m, out.gs[j]);
        }
        out.mu[i][i] = 1;
        out.gs[i] = std::move(v);
        out.gs_norm2[i] = norm2(out.gs[i]);
        if (out.gs_norm2[i] == 0)
            throw degenerate_basis_error("dependent generators");
    }
    return out;
}

GramSchmidt to_float_gs(const RationalGS& exact) {
    const int r = exact.rank();
    GramSchmidt g;
    g.gs_vectors.resize(r);
    g.mu.assign(r, std::vector<real_t>(r, 0.0L));
    g.gs_norms.resize(r);
    g.gs_norm2.resize(r);
    for (int i = 0; i < r; ++i) {
        g.gs_vectors[i].resize(exact.gs[i].size());
        for (size_t k = 0; k < exact.gs[i].size(); ++k)
            g.gs_vectors[i][k] = to_real(exact.gs[i][k]);
        for (int j = 0; j <= i; ++j) g.mu[i][j] = to_real(exact.mu[i][j]);
        g.gs_norm2[i] = to_real(exact.gs_norm2[i]);
        g.gs_norms[i] = std::sqrt(g.gs_norm2[i]);
    }
    return g;
}

real_t GramSchmidt::max_gs_norm() const {
    real_t m = 0;
    for (real_t v : gs_norms) m = std::max(m, v);
    return m;
}

GramSchmidt gram_schmidt(const Basis& B) {
    return to_float_gs(rational_gram_schmidt(B));
}

real_t covering_radius_upper(const GramSchmidt& G) {
    real_t acc = 0;
    for (real_t v : G.gs_norm2) acc += v;
    return std::sqrt(acc / 4.0L);
}

std::optional<RatVec> coords_in_span(const Lattice& L, const RationalGS& gs, const RatVec& t) {
    const int r = L.rank();
    // GS coordinates of t, then back-substitution through mu.
    RatVec gscoord(r);
    for (int i = 0; i < r; ++i) gscoord[i] = dot(t, gs.gs[i]) / gs.gs_norm2[i];
    RatVec x(r);
    for (int i = r - 1; i >= 0; --i) {
        Rat acc = gscoord[i];
        for (int j = i + 1; j < r; ++j) acc -= x[j] * gs.mu[j][i];
        x[i] = acc;
    }
    // Residual check: t - B^T x must vanish.
    RatVec res = t;
    for (int i = 0; i < r; ++i) axpy(res, -x[i], L.vectors[i]);
    for (const auto& q : res)
        if (q != 0) return std::nullopt;
    return x;
}

std::vector<Int> babai_nearest_plane(const Lattice& L, const RationalGS& gs, const RatVec& t) {
    const int r = L.rank();
    RatVec rem = t;
    std::vector<Int> coeffs(r);
    for (int i = r - 1; i >= 0; --i) {
        Rat c = dot(rem, gs.gs[i]) / gs.gs_norm2[i];
        Int z = round_nearest(c);
        coeffs[i] = z;
        axpy(rem, -Rat(z), L.vectors[i]);
    }
    return coeffs;
}

BasisFile read_basis_file(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw error("basis file: missing dimension line");
    int n = 0;
    try {
        n = std::stoi(line);
    } catch (...) {
        throw error("basis file: bad dimension line '" + line + "'");
    }
    if (n < 1) throw error("basis file: dimension must be >= 1");
    RatMat rows;
    for (int i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw error("basis file: truncated");
        std::istringstream ss(line);
        RatVec row;
        std::string tok;
        while (ss >> tok) row.push_back(parse_rational(tok));
        if (static_cast<int>(row.size()) != n)
            throw error("basis file: row " + std::to_string(i + 1) + " has wrong length");
        rows.push_back(std::move(row));
    }
    BasisFile out;
    out.basis = Basis(std::move(rows));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("t:", 0) != 0) throw error("basis file: unexpected line '" + line + "'");
        std::istringstream ss(line.substr(2));
        RatVec tv;
        std::string tok;
        while (ss >> tok) tv.push_back(parse_rational(tok));
        if (static_cast<int>(tv.size()) != n) throw error("basis file: target has wrong length");
        out.target = std::move(tv);
    }
    return out;
}

BasisFile read_basis_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open basis file: " + path);
    return read_basis_file(in);
}

CosetLabel coset_label(const Lattice& L, const RationalGS& gs, const RatVec& v) {
    auto coords = coords_in_span(L, gs, v);
    if (!coords) throw precondition_error("not a lattice vector");
    std::vector<Int> ic(coords->size());
    for (size_t i = 0; i < coords->size(); ++i) {
        if (!is_integer((*coords)[i])) throw precondition_error("not a lattice vector");
        ic[i] = (*coords)[i].get_num();
    }
    return label_of_coeffs(ic);
}

CosetLabel coset_label(const Basis& B, const RatVec& v) {
    return coset_label(B, rational_gram_schmidt(B), v);
}

RatVec coset_representative(const Lattice& L, const CosetLabel& c) {
    RatVec v(L.ambient(), Rat(0));
    for (int i = 0; i < L.rank(); ++i)
        if (c.coeffs[i]) axpy(v, Rat(1), L.vectors[i]);
    return v;
}

void write_basis_file(std::ostream& out, const Basis& B, const RatVec* target) {
    out << B.n() << "\n";
    for (const auto& row : B.vectors) {
        for (size_t j = 0; j < row.size(); ++j)
            out << (j ? " " : "") << format_rational(row[j]);
        out << "\n";
    }
    if (target) {
        out << "t:";
        for (const auto& q : *target) out << " " << format_rational(q);
        out << "\n";
    }
}

}  // namespace latgauss
