#pragma once

// Generated from data/tungsten.materials; keep the two in sync
// (tests/test_materials.cpp compares them).

namespace wirepol {

inline constexpr const char* builtin_material_database = R"WPMAT(# Drude-type optical model of tungsten (Roberts' fit to measured optical
# constants, fitted range 0.365-2.65 um).
#
#   bound_term = K0  lambda_s[um]  delta  [tentative]
#   free_term  = sigma[ohm^-1 m^-1]  lambda_r[um]  [tentative]
#                lambda_r written as <x marks an upper bound only
#   bound_terms_from = T   copies the bound terms of the T-kelvin record
#   sigma0     = tabulated dc conductivity [ohm^-1 m^-1]
format = wirepol-materials 1

[record]
element = tungsten
temperature_K = 298
bound_term = 12.0 1.26 0.6
bound_term = 14.4 0.60 0.8
bound_term = 12.9 0.30 0.6
free_term = 17.50e6 45.5
free_term = 0.21e6 3.7 tentative
sigma0 = 17.7e6
provenance = Roberts tungsten fit, 298 K column

[record]
element = tungsten
temperature_K = 1100
bound_term = 10.9 1.40 1.0
bound_term = 13.4 0.57 1.2
bound_term = 12.0 0.25 1.0
free_term = 3.50e6 9.3
free_term = 0.16e6 <0.36
sigma0 = 3.67e6
provenance = Roberts tungsten fit, 1100 K column

[record]
element = tungsten
temperature_K = 1600
bound_term = 10.9 1.40 1.0
bound_term = 13.4 0.57 1.2
bound_term = 12.0 0.25 1.0
free_term = 2.14e6 6.0
free_term = 0.19e6 <0.36
sigma0 = 2.34e6
provenance = Roberts tungsten fit, 1600 K column

[record]
element = tungsten
temperature_K = 2000
bound_terms_from = 1600
free_term = 1.58e6 4.63 tentative
free_term = 0.22e6 <0.36 tentative
sigma0 = 1.80e6
provenance = Roberts tungsten fit, 2000 K column; bound terms as at 1600 K

[record]
element = tungsten
temperature_K = 2400
bound_terms_from = 1600
free_term = 1.19e6 3.66 tentative
free_term = 0.25e6 <0.36 tentative
sigma0 = 1.44e6
provenance = Roberts tungsten fit, 2400 K column; bound terms as at 1600 K
)WPMAT";

} // namespace wirepol
