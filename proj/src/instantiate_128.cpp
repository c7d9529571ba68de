#include "varfactor/detail/engine_impl.hpp"

VARFACTOR_INSTANTIATE_INTERPOLATION(varfactor::Float128)
VARFACTOR_INSTANTIATE_SAMPLER(varfactor::Float128)
VARFACTOR_INSTANTIATE_ENGINE(varfactor::Float128)
