#pragma once

// Physical constants and species data for a narrow-line tripod scheme,
// defaulting to the 689 nm intercombination transition of 87Sr.

namespace tripod {

namespace phys {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double k_boltzmann = 1.380649e-23;           // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double sr87_mass_u = 86.9088774970;
}  // namespace phys

struct SpeciesConstants {
    double mass = 0.0;             // kg
    double wavelength = 0.0;       // m
    double linewidth = 0.0;        // rad/s
    double wave_number = 0.0;      // 2 pi / wavelength, 1/m
    double recoil_momentum = 0.0;  // hbar k, kg m/s
    double recoil_frequency = 0.0; // hbar k^2 / (2 m), rad/s
};

// Throws std::domain_error if any input is not strictly positive.
SpeciesConstants derive_species_constants(double mass, double wavelength,
                                          double linewidth);

// 87Sr on the 689 nm line, linewidth 2 pi x 7.5 kHz.
SpeciesConstants strontium87_689nm();

}  // namespace tripod
