#pragma once

#include "coxdr/coxeter.hpp"
#include "coxdr/equations.hpp"
#include "coxdr/fans.hpp"
#include "coxdr/subdivision.hpp"
#include "coxdr/tropical.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxdr::io {

using json = nlohmann::ordered_json;

// Rationals travel as "p/q" strings (or "p"); plain JSON integers are accepted on input.
inline json to_json(const Rational& x) { return x.get_str(); }

inline Rational rational_from_json(const json& j) {
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<long>());
    throw std::invalid_argument("expected a rational as a \"p/q\" string or an integer, got " + j.dump());
}

inline json to_json(const RationalVector& v) {
    json a = json::array();
    for (const auto& x : v)
        a.push_back(to_json(x));
    return a;
}

inline RationalVector vector_from_json(const json& j) {
    if (!j.is_array())
        throw std::invalid_argument("expected an array of rationals, got " + j.dump());
    RationalVector v;
    for (const auto& x : j)
        v.push_back(rational_from_json(x));
    return v;
}

inline json to_json(const TropicalValue& t) { return t.str(); }

inline TropicalValue tropical_from_json(const json& j) {
    if (j.is_null())
        return TropicalValue::infinity();
    if (j.is_string())
        return parse_tropical(j.get<std::string>());
    return TropicalValue(rational_from_json(j));
}

inline json pair_json(const MinusculePair& p) {
    return {{"type", to_string(p.type)}, {"rank", p.rank}, {"parabolic", p.parabolic}};
}

inline MinusculePair pair_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("expected an object with \"type\", \"rank\" and \"parabolic\"");
    MinusculePair p;
    p.type = parse_lie_type(j.at("type").get<std::string>());
    p.rank = j.value("rank", p.type == LieType::E6 ? 6 : p.type == LieType::E7 ? 7 : 0);
    if (!j.contains("parabolic"))
        throw std::invalid_argument("missing \"parabolic\"");
    p.parabolic = j.at("parabolic").get<int>();
    validate(p);
    return p;
}

// ---- quotients ----

inline json to_json(const MinusculeQuotient& q) {
    json j = pair_json(q.pair());
    j["dimension"] = q.dimension();
    j["ambient"] = q.ambient();
    j["centroid"] = to_json(q.centroid());
    json verts = json::array();
    for (std::size_t i = 0; i < q.size(); ++i)
        verts.push_back({{"index", i}, {"label", q.label_str(i)}, {"coords", to_json(q.coord(i))}});
    j["vertices"] = std::move(verts);
    json roots = json::array();
    for (const auto& r : q.roots())
        roots.push_back(to_json(r));
    j["roots"] = std::move(roots);
    json edges = json::array();
    for (auto [a, b] : q.edges())
        edges.push_back({a, b});
    j["edges"] = std::move(edges);
    return j;
}

/// Rebuilds the quotient named in the document and checks that labels,
/// coordinates and edges agree with the stored ones.
inline QuotientPtr quotient_from_json(const json& j) {
    auto q = build_quotient(pair_from_json(j));
    if (j.contains("vertices")) {
        const auto& vs = j.at("vertices");
        if (vs.size() != q->size())
            throw std::invalid_argument("quotient document lists " + std::to_string(vs.size()) + " vertices, expected " +
                                        std::to_string(q->size()));
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (vs[i].at("label").get<std::string>() != q->label_str(i))
                throw std::invalid_argument("vertex " + std::to_string(i) + " label mismatch");
            if (vs[i].contains("coords") && vector_from_json(vs[i].at("coords")) != q->coord(i))
                throw std::invalid_argument("vertex " + std::to_string(i) + " coordinates mismatch");
        }
    }
    if (j.contains("edges")) {
        std::vector<std::pair<std::size_t, std::size_t>> es;
        for (const auto& e : j.at("edges"))
            es.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
        if (es != q->edges())
            throw std::invalid_argument("edge list mismatch");
    }
    return q;
}

// ---- equations ----

inline json to_json(const EquationSystem& sys) {
    const auto& q = *sys.quotient;
    json j = pair_json(q.pair());
    j["count"] = sys.size();
    json eqs = json::array();
    for (const auto& f : sys.equations) {
        json ms = json::array(), ls = json::array();
        for (auto [a, b] : f.monomials) {
            ms.push_back({a, b});
            ls.push_back({q.label_str(a), q.label_str(b)});
        }
        eqs.push_back({{"provenance", f.provenance}, {"monomials", std::move(ms)}, {"labels", std::move(ls)}});
    }
    j["equations"] = std::move(eqs);
    return j;
}

// ---- heights ----

inline json heights_json(const MinusculeQuotient& q, const HeightFunction& mu) {
    json j = pair_json(q.pair());
    json hs = json::object();
    for (std::size_t i = 0; i < q.size(); ++i)
        hs[q.label_str(i)] = to_json(mu[i]);
    j["heights"] = std::move(hs);
    return j;
}

/// Heights are an array in vertex order or an object keyed by vertex label.
/// Labels absent from an object are an error unless `missing_inf` is set.
inline HeightFunction heights_from_json(const MinusculeQuotient& q, const json& doc, bool missing_inf = false) {
    const json& h = doc.is_object() && doc.contains("heights") ? doc.at("heights") : doc;
    HeightFunction mu;
    if (h.is_array()) {
        if (h.size() != q.size())
            throw std::invalid_argument("height array has " + std::to_string(h.size()) + " entries, expected " +
                                        std::to_string(q.size()));
        for (const auto& x : h)
            mu.values.push_back(tropical_from_json(x));
        return mu;
    }
    if (!h.is_object())
        throw std::invalid_argument("heights must be an array or an object keyed by vertex label");
    mu.values.assign(q.size(), TropicalValue::infinity());
    std::vector<bool> seen(q.size(), false);
    for (const auto& [label, value] : h.items()) {
        auto v = q.index_of(parse_label(label));
        if (!v)
            throw std::invalid_argument("unknown vertex label " + label + " for " + to_string(q.pair()));
        mu[*v] = tropical_from_json(value);
        seen[*v] = true;
    }
    if (!missing_inf)
        for (std::size_t i = 0; i < q.size(); ++i)
            if (!seen[i])
                throw std::invalid_argument("no height for vertex " + q.label_str(i) +
                                            " (pass --missing-inf to treat absent labels as infinity)");
    return mu;
}

// ---- subdivisions ----

inline json to_json(const MinusculeQuotient& q, const Classification& c) {
    json j = pair_json(q.pair());
    j["dimension"] = c.subdivision.dimension;
    j["triangulation"] = c.subdivision.is_triangulation;
    j["summary"] = to_string(c.summary);
    json cells = json::array();
    for (const auto& r : c.reports) {
        json labels = json::array();
        for (auto v : r.cell.vertices)
            labels.push_back(q.label_str(v));
        json cell = {{"vertices", r.cell.vertices},
                     {"labels", std::move(labels)},
                     {"coxeter_matroid", r.is_coxeter_matroid},
                     {"strong_matroid", r.is_strong_matroid},
                     {"antipodal_pair", has_antipodal_pair(q, r.cell.vertices)}};
        if (r.bad_edge)
            cell["bad_edge"] = {q.label_str(r.bad_edge->first), q.label_str(r.bad_edge->second)};
        if (r.exchange_less)
            cell["no_exchange"] = {q.label_str(r.exchange_less->first), q.label_str(r.exchange_less->second)};
        cells.push_back(std::move(cell));
    }
    j["cells"] = std::move(cells);
    return j;
}

// ---- fans ----

/// Cone dimensions are counted modulo the lineality, matching the f-vector.
inline json to_json(const PolyhedralFan& fan) {
    json j;
    j["ambient"] = fan.ambient;
    json lin = json::array();
    for (const auto& l : fan.lineality)
        lin.push_back(to_json(l));
    j["lineality"] = std::move(lin);
    json rays = json::array();
    for (const auto& r : fan.rays)
        rays.push_back(to_json(r));
    j["rays"] = std::move(rays);
    json cones = json::array();
    for (const auto& c : fan.cones)
        cones.push_back({{"dim", c.dimension - fan.lineality.size()},
                         {"rays", c.rays},
                         {"key", c.key},
                         {"maximal", c.maximal}});
    j["cones"] = std::move(cones);
    j["f_vector"] = fan.f_vector();
    return j;
}

// ---- OFF export ----

namespace detail {

// Coordinates on which projection is injective on the affine hull.
inline std::vector<std::vector<double>> hull_coordinates(const std::vector<RationalVector>& pts) {
    auto ah = affine_hull(pts);
    std::vector<std::vector<double>> out;
    for (const auto& p : pts) {
        std::vector<double> d;
        for (const auto& x : project(p, ah.pivots))
            d.push_back(x.get_d());
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace detail

/// Boundary polygons of every cell of a 3-dimensional subdivision, in OFF.
inline std::string to_off(const MinusculeQuotient& q, const Subdivision& s) {
    if (s.dimension != 3)
        throw std::invalid_argument("OFF export needs a 3-dimensional subdivision, this one has dimension " +
                                    std::to_string(s.dimension));
    auto supp = s.heights.support();
    std::vector<RationalVector> pts;
    for (auto v : supp)
        pts.push_back(q.coord(v));
    auto xyz = detail::hull_coordinates(pts);
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < supp.size(); ++i)
        local[supp[i]] = i;

    std::set<std::vector<std::size_t>> seen;
    std::vector<std::vector<std::size_t>> faces;
    for (const auto& cell : s.cells) {
        std::vector<RationalVector> cp;
        for (auto v : cell.vertices)
            cp.push_back(q.coord(v));
        auto h = convex_hull(cp);
        for (const auto& f : h.facets) {
            std::vector<std::size_t> poly;
            for (auto i : f.incident)
                poly.push_back(local.at(cell.vertices[i]));
            auto key = poly;
            std::sort(key.begin(), key.end());
            if (!seen.insert(key).second)
                continue;
            // order the polygon by angle around its centroid in the facet plane
            std::vector<double> c(3, 0.0);
            for (auto i : poly)
                for (int k = 0; k < 3; ++k)
                    c[k] += xyz[i][k] / static_cast<double>(poly.size());
            std::vector<double> u(3), w(3), nrm(3);
            for (int k = 0; k < 3; ++k)
                u[k] = xyz[poly[0]][k] - c[k];
            for (std::size_t t = 1; t < poly.size(); ++t) {
                std::vector<double> v(3);
                for (int k = 0; k < 3; ++k)
                    v[k] = xyz[poly[t]][k] - c[k];
                nrm = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
                if (std::hypot(nrm[0], nrm[1], nrm[2]) > 1e-9)
                    break;
            }
            w = {nrm[1] * u[2] - nrm[2] * u[1], nrm[2] * u[0] - nrm[0] * u[2], nrm[0] * u[1] - nrm[1] * u[0]};
            auto angle = [&](std::size_t i) {
                double a = 0, b = 0;
                for (int k = 0; k < 3; ++k) {
                    a += (xyz[i][k] - c[k]) * u[k];
                    b += (xyz[i][k] - c[k]) * w[k];
                }
                return std::atan2(b, a);
            };
            std::sort(poly.begin(), poly.end(), [&](std::size_t a, std::size_t b) { return angle(a) < angle(b); });
            faces.push_back(std::move(poly));
        }
    }
    std::ostringstream out;
    out << "OFF\n" << xyz.size() << " " << faces.size() << " 0\n";
    for (const auto& p : xyz)
        out << p[0] << " " << p[1] << " " << p[2] << "\n";
    for (const auto& f : faces) {
        out << f.size();
        for (auto i : f)
            out << " " << i;
        out << "\n";
    }
    return out.str();
}

} // namespace coxdr::io
