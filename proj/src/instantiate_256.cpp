#include "varfactor/detail/engine_impl.hpp"

VARFACTOR_INSTANTIATE_INTERPOLATION(varfactor::Float256)
VARFACTOR_INSTANTIATE_SAMPLER(varfactor::Float256)
VARFACTOR_INSTANTIATE_ENGINE(varfactor::Float256)
