#include "varfactor/detail/engine_impl.hpp"

VARFACTOR_INSTANTIATE_INTERPOLATION(varfactor::Float1024)
VARFACTOR_INSTANTIATE_SAMPLER(varfactor::Float1024)
VARFACTOR_INSTANTIATE_ENGINE(varfactor::Float1024)
