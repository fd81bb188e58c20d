#pragma once

#include "coxdr/equations.hpp"
#include "coxdr/linalg.hpp"
#include "coxdr/lp.hpp"
#include "coxdr/subdivision.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxdr {

/// Raised when a computation would exceed a configured size limit.
struct ScaleGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Closed cone {x : e.x = 0 for e in equations, a.x >= 0 for a in inequalities}.
struct ConeHRep {
    std::vector<RationalVector> equations;
    std::vector<RationalVector> inequalities;

    bool contains(const RationalVector& x) const {
        for (const auto& e : equations)
            if (sgn(dot(e, x)) != 0)
                return false;
        for (const auto& a : inequalities)
            if (sgn(dot(a, x)) < 0)
                return false;
        return true;
    }
    /// Relative interior test; valid once implicit equalities are listed as equations.
    bool relint_contains(const RationalVector& x) const {
        for (const auto& e : equations)
            if (sgn(dot(e, x)) != 0)
                return false;
        for (const auto& a : inequalities)
            if (sgn(dot(a, x)) <= 0)
                return false;
        return true;
    }
};

namespace detail {

// Coordinates on a linear subspace: x = sum_j y_j basis[j].
struct Subspace {
    std::size_t ambient = 0;
    RationalMatrix basis;

    static Subspace whole(std::size_t n) {
        Subspace s{n, {}};
        for (std::size_t i = 0; i < n; ++i)
            s.basis.push_back(unit_vector(n, i));
        return s;
    }
    std::size_t dim() const { return basis.size(); }
    RationalVector restrict(const RationalVector& form) const {
        RationalVector r = zeros(basis.size());
        for (std::size_t i = 0; i < form.size(); ++i)
            if (sgn(form[i]) != 0)
                for (std::size_t j = 0; j < basis.size(); ++j)
                    if (sgn(basis[j][i]) != 0)
                        r[j] += form[i] * basis[j][i];
        return r;
    }
    RationalVector lift(const RationalVector& y) const {
        RationalVector x = zeros(ambient);
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (sgn(y[j]) != 0)
                x = x + y[j] * basis[j];
        return x;
    }
    /// {x in this subspace : f.x = 0 for every form f}, with the change of
    /// coordinates from the new basis to the old one.
    std::pair<Subspace, RationalMatrix> cut(const std::vector<RationalVector>& forms) const {
        RationalMatrix rows;
        for (const auto& f : forms) {
            auto r = restrict(f);
            if (!is_zero(r))
                rows.push_back(std::move(r));
        }
        auto null = nullspace(rows, dim());
        Subspace out{ambient, {}};
        for (auto& v : null) {
            v = primitive_integer(v);
            out.basis.push_back(lift(v));
        }
        return {std::move(out), std::move(null)};
    }
};

// Restricts a row given in old coordinates to the new ones (row . N).
inline RationalVector rebase(const RationalVector& row, const RationalMatrix& null) {
    RationalVector r = zeros(null.size());
    for (std::size_t i = 0; i < row.size(); ++i)
        if (sgn(row[i]) != 0)
            for (std::size_t j = 0; j < null.size(); ++j)
                if (sgn(null[j][i]) != 0)
                    r[j] += row[i] * null[j][i];
    return r;
}

} // namespace detail

struct RelativeInterior {
    RationalVector point;
    ConeHRep normalized;              // implicit equalities moved to equations
    std::vector<std::size_t> implicit; // indices of input inequalities that are implicit equalities
};

/// A relative interior point of a closed cone. Work happens in coordinates on
/// the span of the equations, modulo `lineality` (which every inequality must
/// vanish on). Each LP asks for positive total slack on the undecided
/// inequalities; a witness settles at least one of them, an infeasible LP
/// shows the rest are implicit equalities.
inline RelativeInterior relative_interior(const ConeHRep& cone, std::size_t ambient,
                                          const RationalMatrix& lineality = {}) {
    auto space = detail::Subspace::whole(ambient);
    if (!lineality.empty())
        space = space.cut(lineality).first;
    space = space.cut(cone.equations).first;
    const std::size_t p = space.dim();
    std::vector<RationalVector> rows;
    for (const auto& a : cone.inequalities)
        rows.push_back(space.restrict(a));

    RelativeInterior out;
    RationalVector y = zeros(p);
    std::vector<std::size_t> undecided;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!is_zero(rows[i]))
            undecided.push_back(i);
    std::vector<std::size_t> implicit;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (is_zero(rows[i]))
            implicit.push_back(i);
    while (!undecided.empty()) {
        RationalVector total = zeros(p);
        for (auto i : undecided)
            total = total + rows[i];
        if (is_zero(total))
            break; // nonnegative terms summing to zero
        HalfspaceSystem sys(p);
        for (const auto& r : rows)
            if (!is_zero(r))
                sys.add_ge(r, 0);
        sys.add_ge(total, 1);
        auto x = lp_feasible(sys);
        if (!x)
            break;
        y = y + *x;
        std::vector<std::size_t> rest;
        for (auto i : undecided)
            if (sgn(dot(rows[i], *x)) == 0)
                rest.push_back(i);
        undecided = std::move(rest);
    }
    implicit.insert(implicit.end(), undecided.begin(), undecided.end());
    std::sort(implicit.begin(), implicit.end());
    out.point = space.lift(y);
    out.implicit = implicit;
    out.normalized.equations = cone.equations;
    for (std::size_t i = 0; i < cone.inequalities.size(); ++i) {
        if (std::binary_search(implicit.begin(), implicit.end(), i))
            out.normalized.equations.push_back(cone.inequalities[i]);
        else
            out.normalized.inequalities.push_back(cone.inequalities[i]);
    }
    return out;
}

struct FanCone {
    std::size_t dimension = 0;     // including the lineality space
    std::vector<std::size_t> rays; // indices into PolyhedralFan::rays
    ConeHRep hrep;                 // implicit equalities listed as equations
    RationalVector interior;       // relative interior point
    std::string key;               // canonical label (argmin type or subdivision)
    bool maximal = false;
};

struct PolyhedralFan {
    std::size_t ambient = 0;
    RationalMatrix lineality;          // basis
    std::vector<RationalVector> rays;  // primitive integer, orthogonal to the lineality
    std::vector<FanCone> cones;        // sorted by dimension, then key

    std::size_t lineality_dimension() const { return lineality.size(); }

    /// Number of cones of each dimension, counted from the lineality upward.
    std::vector<std::size_t> f_vector() const {
        std::vector<std::size_t> f;
        for (const auto& c : cones) {
            auto k = c.dimension - lineality.size();
            if (f.size() <= k)
                f.resize(k + 1, 0);
            ++f[k];
        }
        return f;
    }

    std::vector<std::size_t> maximal_cones() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < cones.size(); ++i)
            if (cones[i].maximal)
                out.push_back(i);
        return out;
    }

    std::optional<std::size_t> find(const std::string& key) const {
        for (std::size_t i = 0; i < cones.size(); ++i)
            if (cones[i].key == key)
                return i;
        return std::nullopt;
    }

    /// The cone whose relative interior contains x.
    std::optional<std::size_t> locate(const RationalVector& x) const {
        for (std::size_t i = 0; i < cones.size(); ++i)
            if (cones[i].hrep.relint_contains(x))
                return i;
        return std::nullopt;
    }

    /// Whether x is a nonnegative combination of a cone's rays plus lineality.
    bool cone_generates(std::size_t c, const RationalVector& x) const {
        const auto& rs = cones.at(c).rays;
        const std::size_t vars = rs.size() + lineality.size();
        if (vars == 0)
            return is_zero(x);
        HalfspaceSystem sys(vars);
        for (std::size_t j = 0; j < ambient; ++j) {
            RationalVector row(vars);
            for (std::size_t k = 0; k < rs.size(); ++k)
                row[k] = rays[rs[k]][j];
            for (std::size_t k = 0; k < lineality.size(); ++k)
                row[rs.size() + k] = lineality[k][j];
            if (is_zero(row)) {
                if (sgn(x[j]) != 0)
                    return false;
                continue;
            }
            sys.add_eq(std::move(row), x[j]);
        }
        for (std::size_t k = 0; k < rs.size(); ++k)
            sys.add_ge(unit_vector(vars, k), 0);
        return lp_feasible(sys).has_value();
    }

    /// Support membership decided on the V-representation of the maximal cones.
    bool in_support(const RationalVector& x) const {
        if (x.size() != ambient)
            throw std::invalid_argument("in_support: dimension mismatch");
        for (auto c : maximal_cones())
            if (cone_generates(c, x))
                return true;
        return false;
    }
};

namespace detail {

inline std::string join_indices(const std::vector<std::size_t>& v) {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s << (i ? "," : "") << v[i];
    return s.str();
}

struct ConeSeed {
    std::string key;
    ConeHRep hrep; // normalized
    RationalVector interior;
};

/// Builds lineality, rays, ray incidences and maximality from relatively open
/// cones given by normalized H-representations.
inline PolyhedralFan assemble_fan(std::size_t ambient, std::vector<ConeSeed> seeds) {
    if (seeds.empty())
        throw std::logic_error("assemble_fan: no cones");
    PolyhedralFan fan;
    fan.ambient = ambient;
    for (auto& s : seeds) {
        FanCone c;
        c.dimension = ambient - rank(s.hrep.equations, ambient);
        c.key = std::move(s.key);
        c.hrep = std::move(s.hrep);
        c.interior = std::move(s.interior);
        fan.cones.push_back(std::move(c));
    }
    std::sort(fan.cones.begin(), fan.cones.end(), [](const FanCone& a, const FanCone& b) {
        return a.dimension != b.dimension ? a.dimension < b.dimension : a.key < b.key;
    });
    const auto& bottom = fan.cones.front();
    if (fan.cones.size() > 1 && fan.cones[1].dimension == bottom.dimension)
        throw std::logic_error("assemble_fan: no unique minimal cone");
    fan.lineality = nullspace(bottom.hrep.equations, ambient);
    const std::size_t lin = fan.lineality.size();
    if (bottom.dimension != lin)
        throw std::logic_error("assemble_fan: minimal cone is not a linear space");
    std::vector<std::size_t> ray_cone;
    for (std::size_t i = 0; i < fan.cones.size(); ++i)
        if (fan.cones[i].dimension == lin + 1) {
            fan.rays.push_back(primitive_integer(project_off(fan.cones[i].interior, fan.lineality)));
            ray_cone.push_back(i);
        }
    for (std::size_t i = 0; i < fan.cones.size(); ++i) {
        auto& c = fan.cones[i];
        for (std::size_t r = 0; r < fan.rays.size(); ++r)
            if (c.hrep.contains(fan.rays[r]))
                c.rays.push_back(r);
    }
    // a cone is a face of a larger one exactly when its rays are a subset
    for (auto& c : fan.cones) {
        c.maximal = true;
        for (const auto& d : fan.cones)
            if (d.dimension == c.dimension + 1 &&
                std::includes(d.rays.begin(), d.rays.end(), c.rays.begin(), c.rays.end())) {
                c.maximal = false;
                break;
            }
    }
    return fan;
}

inline RationalVector monomial_form(const Monomial& m, std::size_t n) {
    RationalVector v = zeros(n);
    v[m.first] += 1;
    v[m.second] += 1;
    return v;
}

using ArgminType = std::vector<std::uint32_t>; // one monomial mask per equation

inline std::string type_key(const ArgminType& t) {
    std::ostringstream s;
    for (std::size_t i = 0; i < t.size(); ++i)
        s << (i ? "." : "") << std::hex << t[i];
    return s.str();
}

// Constraints of one equation's argmin set S. With `gap` the other monomials
// exceed the minimum by at least one (the relatively open cone after scaling);
// without it the cone is closed.
inline void add_type_constraints(HalfspaceSystem& sys, const std::vector<Monomial>& eq, std::uint32_t S,
                                 std::size_t n, bool gap) {
    std::size_t first = 0;
    while (!(S >> first & 1u))
        ++first;
    auto base = monomial_form(eq[first], n);
    for (std::size_t k = 0; k < eq.size(); ++k) {
        if (k == first)
            continue;
        auto diff = monomial_form(eq[k], n) - base;
        if (S >> k & 1u)
            sys.add_eq(diff, 0);
        else
            sys.add_ge(diff, gap ? 1 : 0);
    }
}

inline ConeHRep closed_type_cone(const std::vector<std::vector<Monomial>>& eqs, const ArgminType& t, std::size_t n) {
    HalfspaceSystem sys(n);
    for (std::size_t i = 0; i < t.size(); ++i)
        add_type_constraints(sys, eqs[i], t[i], n, false);
    ConeHRep c;
    for (const auto& h : sys.equalities())
        c.equations.push_back(h.normal);
    for (const auto& h : sys.inequalities())
        c.inequalities.push_back(h.normal);
    return c;
}

inline ArgminType argmin_type(const std::vector<std::vector<Monomial>>& eqs, std::size_t upto, const RationalVector& x) {
    ArgminType t;
    for (std::size_t i = 0; i < upto; ++i) {
        std::uint32_t mask = 0;
        std::optional<Rational> best;
        for (std::size_t k = 0; k < eqs[i].size(); ++k) {
            Rational v = x[eqs[i][k].first] + x[eqs[i][k].second];
            if (!best || v < *best) {
                best = v;
                mask = 1u << k;
            } else if (v == *best) {
                mask |= 1u << k;
            }
        }
        t.push_back(mask);
    }
    return t;
}

inline std::vector<std::uint32_t> argmin_candidates(std::size_t monomials) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t S = 0; S < (1u << monomials); ++S)
        if (std::popcount(S) >= 2)
            out.push_back(S);
    return out;
}

} // namespace detail

enum class PrevarietyMethod { enumerate, refine };

struct FanOptions {
    std::size_t max_cones = 100000;
    bool allow_large = false;
    unsigned threads = 1;
    PrevarietyMethod method = PrevarietyMethod::enumerate;
};

/// The fan of finite heights at which every quadric attains its minimum at
/// least twice. Cones are the closures of argmin types.
inline PolyhedralFan prevariety_fan(const std::vector<std::vector<Monomial>>& eqs, std::size_t n,
                                    const FanOptions& opt = {}) {
    for (const auto& e : eqs)
        if (e.size() < 2 || e.size() > 31)
            throw std::invalid_argument("prevariety_fan: quadrics need between 2 and 31 monomials");
    std::atomic<std::size_t> count{0};
    auto bump = [&] {
        if (++count > opt.max_cones && !opt.allow_large)
            throw ScaleGuardError("prevariety fan exceeds " + std::to_string(opt.max_cones) +
                                  " cones; raise the limit or allow large computations");
    };
    std::vector<detail::ConeSeed> seeds;

    // every constraint vanishes on the common lineality, so LPs run on its complement
    RationalMatrix diffs;
    for (const auto& e : eqs)
        for (std::size_t k = 1; k < e.size(); ++k)
            diffs.push_back(detail::monomial_form(e[k], n) - detail::monomial_form(e[0], n));
    const auto lineality = nullspace(diffs, n);

    if (opt.method == PrevarietyMethod::enumerate) {
        // depth-first over argmin types with strict gaps, pruning infeasible
        // prefixes; each node keeps coordinates on its equality subspace
        struct Node {
            detail::Subspace space;
            std::vector<RationalVector> rows; // reduced, each row . y >= 1
            RationalVector witness;           // ambient
        };
        auto child = [&](const Node& parent, std::size_t k, std::uint32_t S) -> std::optional<Node> {
            const auto& e = eqs[k];
            std::size_t first = static_cast<std::size_t>(std::countr_zero(S));
            auto base = detail::monomial_form(e[first], n);
            std::vector<RationalVector> eqf, gaps;
            for (std::size_t m = 0; m < e.size(); ++m) {
                if (m == first)
                    continue;
                (S >> m & 1u ? eqf : gaps).push_back(detail::monomial_form(e[m], n) - base);
            }
            auto [space, change] = parent.space.cut(eqf);
            Node out{std::move(space), {}, {}};
            for (const auto& r : parent.rows) {
                auto rr = detail::rebase(r, change);
                if (is_zero(rr))
                    return std::nullopt;
                out.rows.push_back(primitive_integer(rr));
            }
            for (const auto& g : gaps) {
                auto rr = out.space.restrict(g);
                if (is_zero(rr))
                    return std::nullopt;
                out.rows.push_back(primitive_integer(rr));
            }
            bool reuse = std::all_of(eqf.begin(), eqf.end(),
                                     [&](const RationalVector& f) { return sgn(dot(f, parent.witness)) == 0; });
            Rational low = 1;
            for (const auto& g : gaps) {
                if (!reuse)
                    break;
                Rational v = dot(g, parent.witness);
                if (sgn(v) <= 0)
                    reuse = false;
                else if (v < low)
                    low = v;
            }
            if (reuse) {
                out.witness = parent.witness;
                if (low < 1)
                    out.witness = (1 / low) * out.witness;
                return out;
            }
            HalfspaceSystem sys(out.space.dim());
            for (const auto& r : out.rows)
                sys.add_ge(r, 1);
            auto y = out.space.dim() == 0 ? std::optional<RationalVector>(RationalVector{}) : lp_feasible(sys);
            if (!y)
                return std::nullopt;
            out.witness = out.space.lift(*y);
            return out;
        };
        using Found = std::vector<std::pair<detail::ArgminType, RationalVector>>;
        std::function<void(std::size_t, const Node&, detail::ArgminType&, Found&)> dfs =
            [&](std::size_t k, const Node& node, detail::ArgminType& t, Found& out) {
                if (k == eqs.size()) {
                    bump();
                    out.emplace_back(t, node.witness);
                    return;
                }
                for (auto S : detail::argmin_candidates(eqs[k].size())) {
                    auto next = child(node, k, S);
                    if (!next)
                        continue;
                    t.push_back(S);
                    dfs(k + 1, *next, t, out);
                    t.pop_back();
                }
            };
        Node root{detail::Subspace::whole(n).cut(lineality).first, {}, zeros(n)};
        Found found;
        if (eqs.empty()) {
            found.emplace_back(detail::ArgminType{}, zeros(n));
        } else {
            auto top = detail::argmin_candidates(eqs[0].size());
            std::vector<Found> parts(top.size());
            auto branch = [&](std::size_t b) {
                auto node = child(root, 0, top[b]);
                if (!node)
                    return;
                detail::ArgminType t{top[b]};
                dfs(1, *node, t, parts[b]);
            };
            const unsigned workers = std::max(1u, opt.threads);
            std::atomic<std::size_t> next_branch{0};
            std::vector<std::future<void>> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.push_back(std::async(std::launch::async, [&] {
                    for (std::size_t b; (b = next_branch++) < top.size();)
                        branch(b);
                }));
            for (auto& f : pool)
                f.get();
            for (auto& p : parts)
                for (auto& e : p)
                    found.push_back(std::move(e));
        }
        for (auto& [t, w] : found)
            seeds.push_back({detail::type_key(t), detail::closed_type_cone(eqs, t, n), w});
    } else {
        // refine closed cones one quadric at a time, naming each intersection by
        // the argmin type of a relative interior point
        std::map<std::string, std::pair<ConeHRep, RationalVector>> cones;
        cones.emplace("", std::make_pair(ConeHRep{}, zeros(n)));
        for (std::size_t k = 0; k < eqs.size(); ++k) {
            std::map<std::string, std::pair<ConeHRep, RationalVector>> next;
            count = 0;
            for (const auto& [key, cone] : cones)
                for (auto S : detail::argmin_candidates(eqs[k].size())) {
                    HalfspaceSystem q(n);
                    detail::add_type_constraints(q, eqs[k], S, n, false);
                    ConeHRep meet = cone.first;
                    for (const auto& h : q.equalities())
                        meet.equations.push_back(h.normal);
                    for (const auto& h : q.inequalities())
                        meet.inequalities.push_back(h.normal);
                    auto rel = relative_interior(meet, n, lineality);
                    auto t = detail::argmin_type(eqs, k + 1, rel.point);
                    auto tk = detail::type_key(t);
                    if (next.count(tk))
                        continue;
                    bump();
                    // the argmin type at a relative interior point is strict off its argmin sets
                    next.emplace(tk, std::make_pair(detail::closed_type_cone(eqs, t, n), rel.point));
                }
            cones = std::move(next);
        }
        for (auto& [key, c] : cones)
            seeds.push_back({key, c.first, c.second});
    }
    return detail::assemble_fan(n, std::move(seeds));
}

inline std::vector<std::vector<Monomial>> monomial_lists(const EquationSystem& sys) {
    std::vector<std::vector<Monomial>> out;
    for (const auto& e : sys.equations)
        out.push_back(e.monomials);
    return out;
}

inline PolyhedralFan prevariety_fan(const EquationSystem& sys, const FanOptions& opt = {}) {
    return prevariety_fan(monomial_lists(sys), sys.quotient->size(), opt);
}

inline PolyhedralFan quadric_fan(const TropicalQuadric& f, std::size_t ambient, const FanOptions& opt = {}) {
    return prevariety_fan({f.monomials}, ambient, opt);
}

struct SecondaryOptions {
    std::size_t max_points = 10;
    bool allow_large = false;
};

struct SecondaryFan {
    PolyhedralFan fan;
    std::map<std::string, PointSubdivision> subdivisions; // by cone key
    std::size_t dimension = 0;                              // affine dimension of the configuration
};

namespace detail {

inline std::string subdivision_key(const PointSubdivision& s) {
    std::string k;
    for (std::size_t i = 0; i < s.cells.size(); ++i)
        k += (i ? "|" : "") + join_indices(s.cells[i].vertices);
    return k;
}

/// Folding certificates of a triangulation: for every simplex and every point
/// q outside it, h_q minus the affine interpolation of h at q is nonnegative.
inline std::vector<RationalVector> triangulation_certificates(const std::vector<RationalVector>& points,
                                                              const PointSubdivision& t) {
    const std::size_t n = points.size();
    const std::size_t d = points.front().size();
    std::set<RationalVector, LexLess> rows;
    for (const auto& cell : t.cells) {
        RationalMatrix m(d + 1, RationalVector(cell.vertices.size()));
        for (std::size_t c = 0; c < cell.vertices.size(); ++c) {
            for (std::size_t j = 0; j < d; ++j)
                m[j][c] = points[cell.vertices[c]][j];
            m[d][c] = 1;
        }
        for (std::size_t q = 0; q < n; ++q) {
            if (std::binary_search(cell.vertices.begin(), cell.vertices.end(), q))
                continue;
            RationalVector b = points[q];
            b.push_back(1);
            auto lambda = solve(m, b, cell.vertices.size());
            if (!lambda)
                throw std::logic_error("triangulation_certificates: point outside the affine hull");
            RationalVector row = zeros(n);
            row[q] = 1;
            for (std::size_t c = 0; c < cell.vertices.size(); ++c)
                row[cell.vertices[c]] -= (*lambda)[c];
            rows.insert(primitive_integer(row));
        }
    }
    return {rows.begin(), rows.end()};
}

inline std::vector<RationalVector> irredundant(std::vector<RationalVector> ineqs, std::size_t n) {
    for (std::size_t i = 0; i < ineqs.size();) {
        HalfspaceSystem sys(n);
        for (std::size_t j = 0; j < ineqs.size(); ++j)
            if (j != i)
                sys.add_ge(ineqs[j], 0);
        sys.add_le(ineqs[i], -1);
        if (lp_feasible(sys))
            ++i;
        else
            ineqs.erase(ineqs.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return ineqs;
}

inline bool is_triangulation_for(const std::vector<RationalVector>& points, const PointSubdivision& t,
                                 const RationalVector& h_strict) {
    if (!t.is_triangulation)
        return false;
    for (const auto& a : triangulation_certificates(points, t))
        if (sgn(dot(a, h_strict)) <= 0)
            return false;
    return true;
}

} // namespace detail

/// All regular subdivisions of a small point configuration in convex position,
/// found by walking across the walls of the full-dimensional secondary cones.
inline SecondaryFan secondary_fan(const std::vector<RationalVector>& points, const SecondaryOptions& opt = {}) {
    if (points.empty())
        throw std::invalid_argument("secondary_fan: empty configuration");
    if (points.size() > opt.max_points && !opt.allow_large)
        throw ScaleGuardError("secondary fan of " + std::to_string(points.size()) + " points exceeds the limit of " +
                              std::to_string(opt.max_points));
    const std::size_t n = points.size();
    auto heights_of = [](const RationalVector& h) { return std::vector<Rational>(h.begin(), h.end()); };

    SecondaryFan out;
    out.dimension = affine_hull(points).dimension;

    // generic start: a strictly convex function of the index is not always
    // generic for symmetric configurations, so try a few deterministic patterns
    std::optional<std::pair<RationalVector, PointSubdivision>> start;
    for (unsigned long k = 1; k < 200 && !start; ++k) {
        RationalVector h(n);
        for (std::size_t i = 0; i < n; ++i)
            h[i] = Rational(static_cast<long>((i * i * 7 + i * 3 * k + k * k) % 97));
        auto s = lower_cells(points, heights_of(h));
        if (detail::is_triangulation_for(points, s, h))
            start = std::make_pair(h, s);
    }
    if (!start)
        throw std::logic_error("secondary_fan: no generic starting height found");

    struct Chamber {
        std::vector<RationalVector> facets;
        RationalVector interior;
    };
    std::map<std::string, Chamber> chambers;
    std::vector<std::pair<RationalVector, PointSubdivision>> queue{*start};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        auto [h, t] = queue[head];
        auto key = detail::subdivision_key(t);
        if (chambers.count(key))
            continue;
        Chamber ch{detail::irredundant(detail::triangulation_certificates(points, t), n), h};
        out.subdivisions.emplace(key, t);
        for (std::size_t f = 0; f < ch.facets.size(); ++f) {
            ConeHRep wall;
            wall.equations.push_back(ch.facets[f]);
            for (std::size_t g = 0; g < ch.facets.size(); ++g)
                if (g != f)
                    wall.inequalities.push_back(ch.facets[g]);
            auto hf = relative_interior(wall, n).point;
            Rational eps = 1;
            bool crossed = false;
            for (int tries = 0; tries < 64 && !crossed; ++tries, eps /= 2) {
                RationalVector h2 = hf - eps * ch.facets[f];
                auto t2 = lower_cells(points, heights_of(h2));
                if (!detail::is_triangulation_for(points, t2, h2))
                    continue;
                bool closes = true;
                for (const auto& a : detail::triangulation_certificates(points, t2))
                    closes = closes && sgn(dot(a, hf)) >= 0;
                if (!closes)
                    continue;
                crossed = true;
                queue.emplace_back(h2, t2);
            }
            if (!crossed)
                throw std::logic_error("secondary_fan: could not cross a wall");
        }
        chambers.emplace(key, std::move(ch));
    }

    // faces of every chamber, named by the subdivision at a relative interior point
    std::map<std::string, detail::ConeSeed> seeds;
    for (const auto& [key, ch] : chambers) {
        std::set<std::vector<std::size_t>> seen;
        std::vector<std::vector<std::size_t>> stack{{}};
        while (!stack.empty()) {
            auto tight = stack.back();
            stack.pop_back();
            ConeHRep c;
            for (std::size_t f = 0; f < ch.facets.size(); ++f)
                (std::binary_search(tight.begin(), tight.end(), f) ? c.equations : c.inequalities)
                    .push_back(ch.facets[f]);
            auto rel = relative_interior(c, n);
            // map implicit inequalities back to facet indices
            std::vector<std::size_t> closed = tight;
            std::vector<std::size_t> loose;
            for (std::size_t f = 0; f < ch.facets.size(); ++f)
                if (!std::binary_search(tight.begin(), tight.end(), f))
                    loose.push_back(f);
            for (auto i : rel.implicit)
                closed.push_back(loose[i]);
            std::sort(closed.begin(), closed.end());
            if (!seen.insert(closed).second)
                continue;
            auto sub = lower_cells(points, heights_of(rel.point));
            auto skey = detail::subdivision_key(sub);
            if (!seeds.count(skey)) {
                ConeHRep norm;
                for (std::size_t f = 0; f < ch.facets.size(); ++f)
                    (std::binary_search(closed.begin(), closed.end(), f) ? norm.equations : norm.inequalities)
                        .push_back(ch.facets[f]);
                seeds.emplace(skey, detail::ConeSeed{skey, std::move(norm), rel.point});
                out.subdivisions.emplace(skey, sub);
            }
            for (std::size_t f = 0; f < ch.facets.size(); ++f)
                if (!std::binary_search(closed.begin(), closed.end(), f)) {
                    auto next = closed;
                    next.insert(std::lower_bound(next.begin(), next.end(), f), f);
                    stack.push_back(std::move(next));
                }
        }
    }
    std::vector<detail::ConeSeed> list;
    for (auto& [k, s] : seeds)
        list.push_back(std::move(s));
    out.fan = detail::assemble_fan(n, std::move(list));
    return out;
}

struct SubfanReport {
    bool ambient_match = true;
    bool contained = false;        // Dressian support avoids every open chamber
    bool walls_covered = false;    // every codimension-one secondary cone lies in a Dressian cone
    bool nonfull_covered = false;  // the same for every non-full-dimensional secondary cone
    bool cone_match = false;       // maximal Dressian cones are exactly the walls
    std::size_t dressian_maximal = 0;
    std::size_t secondary_chambers = 0;
    std::size_t secondary_walls = 0;
    std::size_t matched = 0;

    bool supports_equal() const { return contained && nonfull_covered; }
};

namespace detail {

// Generators of a fan cone: its rays and both signs of the fan's lineality.
inline std::vector<RationalVector> cone_generators(const PolyhedralFan& fan, const FanCone& c) {
    std::vector<RationalVector> g;
    for (auto r : c.rays)
        g.push_back(fan.rays[r]);
    for (const auto& l : fan.lineality) {
        g.push_back(l);
        g.push_back(Rational(-1) * l);
    }
    return g;
}

inline bool cone_inside(const PolyhedralFan& fa, const FanCone& a, const FanCone& b) {
    for (const auto& g : cone_generators(fa, a))
        if (!b.hrep.contains(g))
            return false;
    return true;
}

// Some point of cone c (given by generators) lies in the open cone {a.x > 0}.
inline bool meets_open(const PolyhedralFan& fan, const FanCone& c, const std::vector<RationalVector>& open) {
    const auto& rs = c.rays;
    const std::size_t vars = rs.size() + fan.lineality.size();
    if (vars == 0)
        return open.empty();
    HalfspaceSystem sys(vars);
    for (std::size_t k = 0; k < rs.size(); ++k)
        sys.add_ge(unit_vector(vars, k), 0);
    for (const auto& a : open) {
        RationalVector row(vars);
        for (std::size_t k = 0; k < rs.size(); ++k)
            row[k] = dot(a, fan.rays[rs[k]]);
        for (std::size_t k = 0; k < fan.lineality.size(); ++k)
            row[rs.size() + k] = dot(a, fan.lineality[k]);
        if (is_zero(row))
            return false; // a vanishes on the whole cone
        sys.add_ge(std::move(row), 1);
    }
    return lp_feasible(sys).has_value();
}

} // namespace detail

/// Compares the support of a Dressian fan with the non-full-dimensional part
/// of a secondary fan on the same height space.
inline SubfanReport support_subfan_check(const PolyhedralFan& dressian, const SecondaryFan& secondary) {
    const auto& sec = secondary.fan;
    SubfanReport r;
    if (dressian.ambient != sec.ambient) {
        r.ambient_match = false;
        return r;
    }
    const std::size_t full = sec.ambient;
    std::vector<std::size_t> chambers, walls, nonfull;
    for (std::size_t i = 0; i < sec.cones.size(); ++i) {
        if (sec.cones[i].dimension == full)
            chambers.push_back(i);
        else
            nonfull.push_back(i);
        if (sec.cones[i].dimension + 1 == full)
            walls.push_back(i);
    }
    auto dmax = dressian.maximal_cones();
    r.dressian_maximal = dmax.size();
    r.secondary_chambers = chambers.size();
    r.secondary_walls = walls.size();

    r.contained = true;
    for (auto d : dmax)
        for (auto c : chambers)
            if (detail::meets_open(dressian, dressian.cones[d], sec.cones[c].hrep.inequalities))
                r.contained = false;

    auto covered = [&](std::size_t s) {
        for (auto d : dmax)
            if (detail::cone_inside(sec, sec.cones[s], dressian.cones[d]))
                return true;
        return false;
    };
    r.walls_covered = std::all_of(walls.begin(), walls.end(), covered);
    r.nonfull_covered = std::all_of(nonfull.begin(), nonfull.end(), covered);

    for (auto d : dmax)
        for (auto w : walls)
            if (detail::cone_inside(dressian, dressian.cones[d], sec.cones[w]) &&
                detail::cone_inside(sec, sec.cones[w], dressian.cones[d])) {
                ++r.matched;
                break;
            }
    r.cone_match = r.matched == dmax.size() && dmax.size() == walls.size();
    return r;
}

/// Audits a fan: every facet of every cone is a cone of the fan, and any two
/// maximal cones meet in a common face. Returns the first problem found.
inline std::optional<std::string> audit_fan(const PolyhedralFan& fan) {
    const std::size_t lin = fan.lineality.size();
    std::set<std::vector<std::size_t>> ray_sets;
    for (const auto& c : fan.cones)
        ray_sets.insert(c.rays);
    for (const auto& c : fan.cones) {
        if (c.rays.size() < c.dimension - lin)
            return "cone " + c.key + " has too few rays";
        if (c.dimension <= lin + 1)
            continue;
        // facets of a pointed cone are the facets of conv(0, rays) through 0
        std::vector<RationalVector> pts{zeros(fan.ambient)};
        for (auto r : c.rays)
            pts.push_back(fan.rays[r]);
        auto h = convex_hull(pts);
        for (const auto& f : h.facets) {
            if (f.incident.empty() || f.incident.front() != 0)
                continue;
            std::vector<std::size_t> face;
            for (std::size_t i = 1; i < f.incident.size(); ++i)
                face.push_back(c.rays[f.incident[i] - 1]);
            if (!ray_sets.count(face))
                return "a facet of cone " + c.key + " is missing from the fan";
        }
    }
    auto maxi = fan.maximal_cones();
    for (std::size_t a = 0; a < maxi.size(); ++a)
        for (std::size_t b = a + 1; b < maxi.size(); ++b) {
            const auto& A = fan.cones[maxi[a]].rays;
            const auto& B = fan.cones[maxi[b]].rays;
            std::vector<std::size_t> common;
            std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(common));
            HalfspaceSystem sys(fan.ambient);
            for (const auto& l : fan.lineality)
                sys.add_eq(l, 0);
            for (auto r : common)
                sys.add_eq(fan.rays[r], 0);
            for (auto r : A)
                if (!std::binary_search(common.begin(), common.end(), r))
                    sys.add_le(fan.rays[r], -1);
            for (auto r : B)
                if (!std::binary_search(common.begin(), common.end(), r))
                    sys.add_ge(fan.rays[r], 1);
            if (!lp_feasible(sys))
                return "maximal cones " + fan.cones[maxi[a]].key + " and " + fan.cones[maxi[b]].key +
                       " do not meet in a common face";
        }
    return std::nullopt;
}

} // namespace coxdr
