// Build one member of the quadrinomial family over F_{3^6}, check that it is
// scattered, and look at the rank-metric code it spans.
#include <iostream>

#include "scatlin/scatlin.hpp"

using namespace scatlin;

int main() {
    const auto F = make_field(3, 1, 3);
    const PSets sets = psets(*F, 1);

    // First (m, h) the predicate accepts.
    for (Elem m : F->subfield_elements(F->t()))
        for (std::uint32_t i = 1; i < F->order(); ++i) {
            const PsiParams P{F, 1, m, Elem{i}};
            const auto verdict = theorem_main_predicate(P, sets);
            if (!verdict.applies)
                continue;
            const LinPoly f = build_psi(P);
            const RankCode C(f);
            const auto G = stabilizer(f);
            std::cout << "f = " << f.to_string() << "\n"
                      << "case " << verdict.case_tag << ", scattered " << is_scattered_fiber(f) << "\n"
                      << "|L_f| = " << linear_set_size(f) << " of " << scattered_set_size(*F) << "\n"
                      << "min distance " << C.min_distance() << ", MRD " << C.is_mrd() << "\n"
                      << "|G°| = " << G.order_with_zero() << ", field " << G.is_field() << "\n";
            return 0;
        }
    return 1;
}
