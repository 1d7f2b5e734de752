#pragma once

// Root systems of type A, B, C, D and G2 in an ambient Euclidean space with
// rational coordinates, Weyl group enumeration and symbolic pairings.

#include "gpzeta/linform.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpzeta {

using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;

enum class Family { A, B, C, D, G };

inline char family_letter(Family f) {
    switch (f) {
        case Family::A: return 'A';
        case Family::B: return 'B';
        case Family::C: return 'C';
        case Family::D: return 'D';
        case Family::G: return 'G';
    }
    return '?';
}

inline Rational dot(const RVec& a, const RVec& b) {
    Rational out = 0;
    for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
    return out;
}

inline RVec vec_add(RVec a, const RVec& b, const Rational& scale = 1) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
    return a;
}

inline RVec mat_apply(const RMat& m, const RVec& v) {
    RVec out(m.size(), Rational(0));
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = dot(m[i], v);
    return out;
}

inline RMat mat_mul(const RMat& a, const RMat& b) {
    const std::size_t n = a.size();
    RMat out(n, RVec(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

inline RMat mat_identity(std::size_t n) {
    RMat out(n, RVec(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
    return out;
}

inline RMat mat_transpose(const RMat& m) {
    RMat out(m.size(), RVec(m.size(), Rational(0)));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) out[j][i] = m[i][j];
    return out;
}

struct WeylElement {
    std::vector<int> word;  // simple reflection indices, leftmost applied last
    RMat action;            // ambient matrix
    int length = 0;
};

struct ParabolicDescriptor {
    int removed = 0;             // index of α_P in the simple roots
    std::vector<int> retained;   // β_1..β_{r-1}, in simple-root order
    std::string name;            // e.g. "P21", "Plong", "P2e2"
};

class RootSystem {
public:
    Family family = Family::A;
    int rank = 0;
    int dim = 0;
    std::vector<RVec> simple_roots;
    std::vector<RVec> roots;           // all roots
    std::vector<RVec> positive_roots;  // ordered by height, then lexicographically
    RVec rho;
    std::vector<std::string> variables;  // free λ variables
    std::vector<LinForm> lambda;         // ambient coordinates of λ in the free variables
    std::string convention;

    std::string name() const { return std::string(1, family_letter(family)) + std::to_string(rank); }

    RVec coroot(const RVec& alpha) const {
        Rational n2 = dot(alpha, alpha);
        RVec out = alpha;
        for (auto& x : out) x = x * 2 / n2;
        return out;
    }

    /// Coordinates of a vector of the root lattice in the simple-root basis.
    RVec simple_coordinates(const RVec& v) const {
        const int r = rank;
        RMat a(r, RVec(r + 1, Rational(0)));
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) a[i][j] = dot(simple_roots[i], simple_roots[j]);
            a[i][r] = dot(simple_roots[i], v);
        }
        for (int c = 0; c < r; ++c) {
            int p = c;
            while (a[p][c] == 0) ++p;
            std::swap(a[p], a[c]);
            for (int i = 0; i < r; ++i) {
                if (i == c || a[i][c] == 0) continue;
                Rational f = a[i][c] / a[c][c];
                for (int j = c; j <= r; ++j) a[i][j] -= f * a[c][j];
            }
        }
        RVec out(r);
        for (int i = 0; i < r; ++i) out[i] = a[i][r] / a[i][i];
        return out;
    }

    bool is_positive(const RVec& root) const {
        for (const auto& c : simple_coordinates(root))
            if (c != 0) return c > 0;
        return false;
    }

    bool is_root(const RVec& v) const { return std::find(roots.begin(), roots.end(), v) != roots.end(); }

    /// Pairing ⟨λ, α∨⟩ in the free variables.
    LinForm pairing(const RVec& alpha) const { return pairing_with(lambda, coroot(alpha)); }

    /// Same pairing with λ given by unconstrained ambient coordinates z1..z_dim.
    LinForm pairing_ambient(const RVec& alpha) const {
        std::vector<LinForm> amb;
        for (int i = 0; i < dim; ++i) amb.push_back(LinForm::variable("z" + std::to_string(i + 1)));
        return pairing_with(amb, coroot(alpha));
    }

    /// A symbolic vector in the same convention as λ, with variables prefix1..prefixr.
    std::vector<LinForm> symbolic_vector(const std::string& prefix) const {
        std::map<std::string, LinForm> rename;
        for (int i = 0; i < rank; ++i)
            rename[variables[i]] = LinForm::variable(prefix + std::to_string(i + 1));
        std::vector<LinForm> out;
        for (const auto& f : lambda) out.push_back(f.substitute(rename));
        return out;
    }

    static LinForm pairing_with(const std::vector<LinForm>& vec, const RVec& w) {
        LinForm out;
        for (std::size_t i = 0; i < vec.size(); ++i)
            if (w[i] != 0) out += vec[i] * w[i];
        return out;
    }

    ParabolicDescriptor parabolic(int removed) const {
        if (removed < 0 || removed >= rank) throw std::invalid_argument("simple root index out of range");
        ParabolicDescriptor p;
        p.removed = removed;
        for (int i = 0; i < rank; ++i)
            if (i != removed) p.retained.push_back(i);
        p.name = parabolic_name(removed);
        return p;
    }

    std::string parabolic_name(int removed) const {
        if (family == Family::A) {
            int n = rank + 1;
            if (rank == 1) return "B";
            return "P" + std::to_string(removed + 1) + std::to_string(n - removed - 1);
        }
        if (family == Family::G) return removed == 1 ? "Plong" : "Pshort";
        // Sp(4) labels name the root whose hyperplane is residued, as in the
        // displayed closed forms: Pe1-e2 takes the residue along z1-z2=1.
        if (family == Family::C && rank == 2) return removed == 1 ? "Pe1-e2" : "P2e2";
        return "P" + std::to_string(removed + 1);
    }

    /// Resolves a parabolic label such as "P21", "B", "Plong", "P2e2" or "P1".
    ParabolicDescriptor parabolic(const std::string& label) const {
        for (int i = 0; i < rank; ++i)
            if (parabolic_name(i) == label) return parabolic(i);
        if (label.size() >= 2 && label[0] == 'P' &&
            std::all_of(label.begin() + 1, label.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            int idx = std::stoi(label.substr(1)) - 1;
            if (family == Family::C && rank == 2 && label.size() == 2 && idx >= 0 && idx < 2)
                return parabolic(idx == 0 ? "Pe1-e2" : "P2e2");
            if (label.size() == 2 && idx >= 0 && idx < rank) return parabolic(idx);
        }
        throw std::invalid_argument("unknown parabolic '" + label + "' for " + name());
    }
};

namespace detail {

inline RVec unit(int dim, int i, const Rational& c = 1) {
    RVec v(dim, Rational(0));
    v[i] = c;
    return v;
}

inline RVec reflect(const RVec& v, const RVec& alpha) {
    Rational f = 2 * dot(v, alpha) / dot(alpha, alpha);
    return vec_add(v, alpha, -f);
}

inline RMat reflection_matrix(const RVec& alpha) {
    const std::size_t n = alpha.size();
    RMat m(n, RVec(n, Rational(0)));
    for (std::size_t j = 0; j < n; ++j) {
        RVec col = reflect(unit(static_cast<int>(n), static_cast<int>(j)), alpha);
        for (std::size_t i = 0; i < n; ++i) m[i][j] = col[i];
    }
    return m;
}

}  // namespace detail

inline RootSystem build_root_system(Family family, int rank) {
    RootSystem rs;
    rs.family = family;
    rs.rank = rank;
    auto zvar = [](int i) { return "z" + std::to_string(i + 1); };
    switch (family) {
        case Family::A: {
            if (rank < 1) throw std::invalid_argument("type A needs rank >= 1");
            const int n = rank + 1;
            rs.dim = n;
            for (int i = 0; i + 1 < n; ++i)
                rs.simple_roots.push_back(vec_add(detail::unit(n, i), detail::unit(n, i + 1), -1));
            LinForm last;
            for (int i = 0; i + 1 < n; ++i) {
                rs.variables.push_back(zvar(i));
                rs.lambda.push_back(LinForm::variable(zvar(i)));
                last -= LinForm::variable(zvar(i));
            }
            rs.lambda.push_back(last);
            rs.convention = "lambda = (z1, ..., z" + std::to_string(n - 1) + ", -(z1+...+z" +
                            std::to_string(n - 1) + ")), sum of coordinates zero";
            break;
        }
        case Family::B:
        case Family::C:
        case Family::D: {
            if (rank < 2) throw std::invalid_argument("types B, C, D need rank >= 2");
            if (family == Family::D && rank < 3)
                throw std::invalid_argument("type D needs rank >= 3");
            const int n = rank;
            rs.dim = n;
            for (int i = 0; i + 1 < n; ++i)
                rs.simple_roots.push_back(vec_add(detail::unit(n, i), detail::unit(n, i + 1), -1));
            if (family == Family::B) rs.simple_roots.push_back(detail::unit(n, n - 1));
            if (family == Family::C) rs.simple_roots.push_back(detail::unit(n, n - 1, 2));
            if (family == Family::D)
                rs.simple_roots.push_back(vec_add(detail::unit(n, n - 2), detail::unit(n, n - 1)));
            for (int i = 0; i < n; ++i) {
                rs.variables.push_back(zvar(i));
                rs.lambda.push_back(LinForm::variable(zvar(i)));
            }
            rs.convention = "lambda = z1 e1 + ... + z" + std::to_string(n) + " e" + std::to_string(n);
            break;
        }
        case Family::G: {
            if (rank != 2) throw std::invalid_argument("type G needs rank 2");
            rs.dim = 3;
            RVec as{Rational(1), Rational(-1), Rational(0)};
            RVec al{Rational(-2), Rational(1), Rational(1)};
            rs.simple_roots = {as, al};
            RVec b1 = vec_add(vec_add(as, as), al);  // 2αs+αl
            RVec b2 = vec_add(as, al);               // αs+αl
            for (int i = 0; i < 2; ++i) rs.variables.push_back(zvar(i));
            for (int k = 0; k < 3; ++k)
                rs.lambda.push_back(LinForm::variable("z1", b1[k]) + LinForm::variable("z2", b2[k]));
            rs.convention = "lambda = z1 (2 a_short + a_long) + z2 (a_short + a_long)";
            break;
        }
    }
    // all roots: closure of the simple roots under simple reflections
    std::vector<RVec> todo = rs.simple_roots;
    std::vector<RVec> found;
    while (!todo.empty()) {
        RVec v = todo.back();
        todo.pop_back();
        if (std::find(found.begin(), found.end(), v) != found.end()) continue;
        found.push_back(v);
        for (const auto& a : rs.simple_roots) todo.push_back(detail::reflect(v, a));
    }
    rs.roots = found;
    for (const auto& v : found)
        if (rs.is_positive(v)) rs.positive_roots.push_back(v);
    auto height = [&](const RVec& v) {
        Rational h = 0;
        for (const auto& c : rs.simple_coordinates(v)) h += c;
        return h;
    };
    std::sort(rs.positive_roots.begin(), rs.positive_roots.end(), [&](const RVec& a, const RVec& b) {
        Rational ha = height(a), hb = height(b);
        if (ha != hb) return ha < hb;
        return rs.simple_coordinates(a) < rs.simple_coordinates(b);
    });
    std::sort(rs.roots.begin(), rs.roots.end());
    rs.rho = RVec(rs.dim, Rational(0));
    for (const auto& v : rs.positive_roots) rs.rho = vec_add(rs.rho, v, Rational(1, 2));
    return rs;
}

/// Parses "A2", "C2", "G2", "SL3", "Sp4", "SO5", "SO8".
inline RootSystem build_root_system(const std::string& label) {
    auto tail_int = [&](std::size_t from) {
        std::string t = label.substr(from);
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw std::invalid_argument("unknown group '" + label + "'");
        return std::stoi(t);
    };
    if (label.rfind("SL", 0) == 0) return build_root_system(Family::A, tail_int(2) - 1);
    if (label.rfind("Sp", 0) == 0) {
        int n2 = tail_int(2);
        if (n2 % 2) throw std::invalid_argument("Sp needs an even index: '" + label + "'");
        return build_root_system(Family::C, n2 / 2);
    }
    if (label.rfind("SO", 0) == 0) {
        int n = tail_int(2);
        return n % 2 ? build_root_system(Family::B, n / 2) : build_root_system(Family::D, n / 2);
    }
    if (label.size() >= 2) {
        switch (label[0]) {
            case 'A': return build_root_system(Family::A, tail_int(1));
            case 'B': return build_root_system(Family::B, tail_int(1));
            case 'C': return build_root_system(Family::C, tail_int(1));
            case 'D': return build_root_system(Family::D, tail_int(1));
            case 'G': return build_root_system(Family::G, tail_int(1));
            default: break;
        }
    }
    throw std::invalid_argument("unknown group '" + label + "'");
}

/// Breadth-first enumeration; words are reduced because BFS visits by length.
inline std::vector<WeylElement> weyl_group(const RootSystem& rs, std::size_t cap = 100000) {
    std::vector<RMat> refl;
    for (const auto& a : rs.simple_roots) refl.push_back(detail::reflection_matrix(a));
    std::vector<WeylElement> out;
    std::map<RMat, std::size_t> seen;
    WeylElement id;
    id.action = mat_identity(rs.dim);
    seen[id.action] = 0;
    out.push_back(id);
    for (std::size_t head = 0; head < out.size(); ++head) {
        for (int i = 0; i < rs.rank; ++i) {
            RMat m = mat_mul(refl[i], out[head].action);
            if (seen.count(m)) continue;
            if (out.size() >= cap) throw std::length_error("Weyl group exceeds the configured cap");
            WeylElement w;
            w.word = out[head].word;
            w.word.insert(w.word.begin(), i);
            w.action = m;
            w.length = out[head].length + 1;
            seen[m] = out.size();
            out.push_back(std::move(w));
        }
    }
    return out;
}

inline std::vector<RVec> inversion_set(const RootSystem& rs, const WeylElement& w) {
    std::vector<RVec> out;
    for (const auto& a : rs.positive_roots)
        if (!rs.is_positive(mat_apply(w.action, a))) out.push_back(a);
    return out;
}

inline nlohmann::json rvec_json(const RVec& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
}

inline nlohmann::json to_json(const RootSystem& rs, bool with_weyl = false) {
    nlohmann::json j;
    j["name"] = rs.name();
    j["family"] = std::string(1, family_letter(rs.family));
    j["rank"] = rs.rank;
    j["ambient_dim"] = rs.dim;
    j["convention"] = rs.convention;
    j["variables"] = rs.variables;
    for (const auto& a : rs.simple_roots) j["simple_roots"].push_back(rvec_json(a));
    for (const auto& a : rs.positive_roots) {
        j["positive_roots"].push_back(rvec_json(a));
        j["positive_coroots"].push_back(rvec_json(rs.coroot(a)));
    }
    j["rho"] = rvec_json(rs.rho);
    nlohmann::json pair = nlohmann::json::array();
    for (const auto& a : rs.simple_roots) pair.push_back(rs.pairing(a).str());
    j["simple_pairings"] = pair;
    auto w = weyl_group(rs);
    j["weyl_order"] = w.size();
    if (with_weyl) {
        for (const auto& e : w) {
            nlohmann::json m = nlohmann::json::array();
            for (const auto& row : e.action) m.push_back(rvec_json(row));
            j["weyl"].push_back({{"word", e.word}, {"length", e.length}, {"matrix", m}});
        }
    }
    return j;
}

}  // namespace gpzeta
