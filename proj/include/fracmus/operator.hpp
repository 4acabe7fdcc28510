#pragma once

#include "fracmus/family.hpp"
#include "fracmus/grid.hpp"

namespace fracmus {

struct OperatorSpec {
    const MusielakFamily* family = nullptr;
    double s = 0.5;
    QuadSpec quad;

    void validate() const;
};

// Nodal values on Omega of
//   2 sum_{y != x, y in Lambda} a(x, y, |D^s u|) D^s u w_y / |x - y|^{N + s},
// with u extended by zero to the truncation box Lambda (or restricted to
// Omega when the truncation factor is 0). Pairs closer than one cell are
// dropped.
GridFunction apply_operator(const OperatorSpec& spec, const GridFunction& u);

// Sum of the two double integrals of a(|D^{s_i} u|) D^{s_i} u D^{s_i} v over
// Omega x Omega against dxdy / |x - y|^N.
double weak_form(const OperatorSpec& spec1, const OperatorSpec& spec2, const GridFunction& u,
                 const GridFunction& v);

// One term of weak_form.
double weak_form_term(const OperatorSpec& spec, const GridFunction& u, const GridFunction& v);

}  // namespace fracmus
