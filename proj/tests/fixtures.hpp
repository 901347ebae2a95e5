#pragma once

#include <gtest/gtest.h>

#include "oddform/formideal.hpp"
#include "oddform/ring.hpp"

namespace fx {

using namespace oddform;

inline HermitianCtx f2(int n = 3) { return make_ctx(modular_spec(2, "1", "1", n)); }
inline HermitianCtx z4() { return make_ctx(modular_spec(4, "1", "2")); }
inline HermitianCtx g3() { return make_ctx(gaussian_spec(3, "1", "1")); }
// lambda = 3 is a legal symmetry over Z/4 once mu = 0
inline HermitianCtx z4_lambda3() { return make_ctx(modular_spec(4, "3", "0")); }

inline FormRing fr_max(const HermitianCtx& c) { return make_form_ring(c, delta_max(c)); }
inline FormRing fr_min(const HermitianCtx& c) { return make_form_ring(c, delta_min(c)); }

inline Elem e(const HermitianCtx& c, const char* s) { return c.parse(s); }
inline HeisElem h(const HermitianCtx& c, const char* x, const char* y) { return {c.parse(x), c.parse(y)}; }

}  // namespace fx
