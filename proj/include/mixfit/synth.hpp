#pragma once

#include <cstdint>
#include <vector>

#include "mixfit/dataset.hpp"
#include "mixfit/distributions.hpp"

namespace mixfit {

/// One generating component and how many observations to draw from it.
struct SynthComponent {
    ComponentParams params;
    long long size = 0;
};

struct SynthSpec {
    Family family = Family::Gaussian1D;
    std::vector<SynthComponent> components;
    std::uint64_t seed = 0;
};

/// Draws each subset from its component in listed order and concatenates
/// them (no shuffle, so the generating identity of row i is recoverable from
/// the sizes). Deterministic per seed. When `labels` is given it receives the
/// generating component index of every row.
Dataset synth_dataset(const SynthSpec& spec, std::vector<int>* labels = nullptr);

/// The `paper-gaussian` preset: 700 draws from N(-10, 1.2^2), 1000 from
/// N(0, 2^2), 500 from N(5, 5^2); n = 2200.
SynthSpec paper_gaussian_spec(std::uint64_t seed);

/// The `paper-poisson` preset: a fixed frequency table over x = 0..20 with
/// n = 2666 (the trailing x = 20 row has frequency 0).
const std::vector<std::pair<long long, long long>>& paper_poisson_table();

/// The same table as a ready-to-fit dataset.
Dataset paper_poisson_dataset();

}  // namespace mixfit
