// Two family members at different steps: search for a GL(2, q^n) map between
// their subspaces and print the step class with its conditions.
#include <iostream>

#include "scatlin/scatlin.hpp"

using namespace scatlin;

namespace {

PsiParams first_applicable(const FieldPtr& F, unsigned s) {
    const PSets sets = psets(*F, s);
    for (Elem m : F->subfield_elements(F->t()))
        for (std::uint32_t i = 1; i < F->order(); ++i)
            if (const PsiParams P{F, s, m, Elem{i}}; theorem_main_predicate(P, sets).applies)
                return P;
    throw Error("no applicable parameters");
}

}  // namespace

int main() {
    const auto F = make_field(3, 1, 5);
    for (unsigned l : {1u, 3u, 9u}) {
        const PsiParams P = first_applicable(F, 1), Q = first_applicable(F, l);
        const auto w = gl_equivalent(build_psi(P), build_psi(Q));
        const auto c = pair_equivalence_conditions(P, Q);
        std::cout << "s = 1, l = " << l << ": class " << c.case_tag << ", conditions "
                  << (c.conditions_hold ? "hold" : "fail") << ", witness " << (w ? "found" : "none") << "\n";
        if (w)
            std::cout << "  " << mat_json(*w).dump() << "\n";
    }
}
