#include "varfactor/detail/engine_impl.hpp"

VARFACTOR_INSTANTIATE_INTERPOLATION(varfactor::Float512)
VARFACTOR_INSTANTIATE_SAMPLER(varfactor::Float512)
VARFACTOR_INSTANTIATE_ENGINE(varfactor::Float512)
