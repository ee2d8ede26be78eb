#include "tripod/species.hpp"

#include <stdexcept>

namespace tripod {

SpeciesConstants derive_species_constants(double mass, double wavelength,
                                          double linewidth) {
    if (mass <= 0.0 || wavelength <= 0.0 || linewidth <= 0.0)
        throw std::domain_error("species constants must be strictly positive");
    SpeciesConstants sc;
    sc.mass = mass;
    sc.wavelength = wavelength;
    sc.linewidth = linewidth;
    sc.wave_number = 2.0 * phys::pi / wavelength;
    sc.recoil_momentum = phys::hbar * sc.wave_number;
    sc.recoil_frequency = phys::hbar * sc.wave_number * sc.wave_number / (2.0 * mass);
    return sc;
}

SpeciesConstants strontium87_689nm() {
    return derive_species_constants(phys::sr87_mass_u * phys::atomic_mass_unit,
                                    689e-9, 2.0 * phys::pi * 7.5e3);
}

}  // namespace tripod
