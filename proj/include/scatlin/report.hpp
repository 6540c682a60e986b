#pragma once

// JSON forms of fields, polynomials and the reports produced by the drivers.
// Elements are written as integer indices.

#include <json.hpp>

#include "equivalence.hpp"
#include "mrdcodes.hpp"
#include "properties.hpp"
#include "sweep.hpp"

namespace scatlin {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json field_json(const Field& F) {
    return json{{"p", F.p()}, {"e", F.e()}, {"t", F.t()}, {"q", F.q()}, {"modulus", F.modulus()}};
}

/// Rebuilds the field; the stored modulus must match the canonical choice.
inline FieldPtr field_from_json(const json& j, FieldOptions opts = {}) {
    auto F = make_field(j.at("p").get<std::uint32_t>(), j.at("e").get<std::uint32_t>(), j.at("t").get<std::uint32_t>(), opts);
    if (j.contains("modulus") && j.at("modulus").get<std::vector<std::uint32_t>>() != F->modulus())
        throw Error("stored modulus differs from the canonical modulus");
    return F;
}

inline json poly_json(const LinPoly& f) {
    std::vector<std::uint32_t> c;
    for (Elem x : f.coeffs())
        c.push_back(x.index);
    return json{{"s", f.step()}, {"coeffs", c}, {"text", f.to_string()}};
}

inline LinPoly poly_from_json(const FieldPtr& F, const json& j) {
    std::vector<Elem> c;
    for (auto idx : j.at("coeffs").get<std::vector<std::uint32_t>>()) {
        if (idx >= F->order())
            throw Error("coefficient index outside the field");
        c.push_back(Elem{idx});
    }
    return LinPoly(F, j.at("s").get<unsigned>(), std::move(c));
}

inline json mat_json(const Mat2& M) {
    return json::array({json::array({M.alpha.index, M.beta.index}), json::array({M.gamma.index, M.delta.index})});
}

inline Mat2 mat_from_json(const json& j) {
    return Mat2{Elem{j.at(0).at(0).get<std::uint32_t>()}, Elem{j.at(0).at(1).get<std::uint32_t>()},
                Elem{j.at(1).at(0).get<std::uint32_t>()}, Elem{j.at(1).at(1).get<std::uint32_t>()}};
}

inline json record_json(const SweepRecord& r) {
    json j{{"m", r.m.index},
           {"h", r.h.index},
           {"norm_h", r.norm_h},
           {"case_tag", r.case_tag},
           {"prior_tag", r.prior_tag},
           {"scattered", r.scattered}};
    if (r.linear_set_size)
        j["linear_set_size"] = *r.linear_set_size;
    if (r.scattered_roots)
        j["scattered_roots"] = *r.scattered_roots;
    if (r.witness)
        j["witness"] = json{{"x", r.witness->x.index},
                            {"y", r.witness->y.index},
                            {"method", r.witness->method},
                            {"gamma", r.witness->gamma.index},
                            {"xi", r.witness->xi.index}};
    return j;
}

inline SweepRecord record_from_json(const json& j) {
    SweepRecord r;
    r.m = Elem{j.at("m").get<std::uint32_t>()};
    r.h = Elem{j.at("h").get<std::uint32_t>()};
    r.norm_h = j.at("norm_h").get<int>();
    r.case_tag = j.at("case_tag").get<std::string>();
    r.prior_tag = j.at("prior_tag").get<std::string>();
    r.scattered = j.at("scattered").get<bool>();
    if (j.contains("linear_set_size"))
        r.linear_set_size = j.at("linear_set_size").get<std::uint64_t>();
    if (j.contains("scattered_roots"))
        r.scattered_roots = j.at("scattered_roots").get<bool>();
    if (j.contains("witness")) {
        const auto& w = j.at("witness");
        r.witness = PsiWitness{Elem{w.at("x").get<std::uint32_t>()}, Elem{w.at("y").get<std::uint32_t>()},
                               w.at("method").get<std::string>(), Elem{w.at("gamma").get<std::uint32_t>()},
                               Elem{w.at("xi").get<std::uint32_t>()}};
    }
    return r;
}

inline bool operator==(const PsiWitness& a, const PsiWitness& b) {
    return a.x == b.x && a.y == b.y && a.method == b.method && a.gamma == b.gamma && a.xi == b.xi;
}

inline bool operator==(const SweepRecord& a, const SweepRecord& b) {
    return a.m == b.m && a.h == b.h && a.norm_h == b.norm_h && a.case_tag == b.case_tag && a.prior_tag == b.prior_tag &&
           a.scattered == b.scattered && a.linear_set_size == b.linear_set_size &&
           a.scattered_roots == b.scattered_roots && a.witness == b.witness;
}

inline json summary_json(const SweepSummary& s) {
    return json{{"pairs", s.pairs},
                {"scattered", s.scattered},
                {"applies", s.applies},
                {"violations", s.violations},
                {"scattered_outside_predicate", s.outside},
                {"scattered_outside_predicate_nonzero_m", s.outside_nonzero_m},
                {"prior_tagged", s.prior_tagged},
                {"prior_not_covered", s.prior_not_covered},
                {"minus_domain", s.minus_domain},
                {"minus_domain_scattered", s.minus_domain_scattered},
                {"witnesses_verified", s.witnesses_verified},
                {"oracle_mismatches", s.oracle_mismatches},
                {"by_case", s.by_case},
                {"scattered_by_case", s.scattered_by_case},
                {"ok", s.ok()}};
}

inline json stabilizer_json(const StabilizerSet& S, std::size_t sample = 8) {
    json el = json::array();
    for (std::size_t i = 0; i < std::min(sample, S.elements.size()); ++i)
        el.push_back(mat_json(S.elements[i]));
    return json{{"order", S.order_with_zero()},
                {"is_field", S.is_field()},
                {"additive_closed", S.additive_closed},
                {"multiplicative_closed", S.multiplicative_closed},
                {"closure_exhaustive", S.closure_exhaustive},
                {"diagonal_only", S.diagonal_only},
                {"sample_elements", el}};
}

inline json conditions_json(const PairConditions& c) {
    json alts = json::array();
    for (const auto& a : c.alternatives) {
        json j{{"relation", a.relation}, {"holds", a.holds}};
        if (a.z)
            j["z"] = a.z->index;
        alts.push_back(std::move(j));
    }
    json j{{"case", std::string(1, c.case_tag)},
           {"subfield_degree_short", c.subfield_degree_short},
           {"subfield_degree_long", c.subfield_degree_long},
           {"subfield_short", c.subfield_short},
           {"subfield_long", c.subfield_long},
           {"alternatives", alts},
           {"conditions_hold", c.conditions_hold}};
    if (c.subfield_element)
        j["subfield_element"] = c.subfield_element->index;
    return j;
}

/// A found witness must land in a case whose conditions hold; without a
/// witness nothing is claimed.
inline bool pair_agrees(const PairConditions& c, const std::optional<Mat2>& w) { return !w || c.conditions_hold; }

inline json pair_json(const PairConditions& c, const std::optional<Mat2>& w) {
    json j{{"case", std::string(1, c.case_tag)}, {"conditions", conditions_json(c)}, {"agree", pair_agrees(c, w)}};
    j["gl_witness"] = w ? mat_json(*w) : json(nullptr);
    return j;
}

inline json property_json(const PropertyResult& r) {
    json j{{"name", r.name}, {"statement", r.statement}, {"checked", r.checked}, {"failed", r.failed}, {"passed", r.passed()}};
    if (!r.first_failure.empty())
        j["first_failure"] = r.first_failure;
    return j;
}

}  // namespace scatlin
