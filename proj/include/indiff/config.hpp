#ifndef INDIFF_CONFIG_HPP
#define INDIFF_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "indiff/black_scholes.hpp"
#include "indiff/levy.hpp"
#include "indiff/pide.hpp"

namespace indiff {

// Flat key-value sections:
//
//   [model]
//   type = merton            # merton | atoms
//   sigma = 0.2
//   lambda_m = 5.0
//   gamma_j = -0.05
//   delta_j = 0.1
//   martingale = true        # or: mu = <drift>
//   truncation_mult = 8.0
//   apply_memm = true        # tilt through the MEMM before solving
//   # atoms = 0.1:2.0, -0.1:2.0   (size:mass pairs, type = atoms)
//
//   [option]  kind / strike / maturity / spot
//   [grid]    n_time / m_half / k_half / dx / x0 (number or auto) / alpha
//   [run]     command / format / out / seed / threads / with_pide / sweep
//
// '#' and ';' start comments. Unknown keys are reported as errors with
// their section path.
struct RunConfig {
    struct Model {
        std::string type = "merton";
        MertonParams merton;
        double atoms_sigma = 0.0;
        std::vector<JumpAtom> atoms;
        bool martingale = true;
        std::optional<double> mu;
        double truncation_mult = 8.0;
        bool apply_memm = true;
    } model;

    OptionSpec option{OptionKind::put, 1.0, 1.0, 1.0};

    PideGrid grid;
    bool grid_x0_auto = true;

    struct Run {
        std::string command;
        std::string format = "csv";
        std::string out;
        std::uint64_t seed = 42;
        int threads = 1;
        bool with_pide = true;
        std::string sweep;   // KEY=a:b:n
    } run;

    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& text);

    // physical-measure model as configured
    LevyModel build_model() const;
    // model the pricing runs use: MEMM-tilted when apply_memm is set
    LevyModel pricing_model() const;
    GroupParams group_params() const;

    void validate() const;
};

// parsed sweep request: key=a:b:n
struct SweepRequest {
    std::string key;
    double from = 0.0, to = 0.0;
    int count = 0;
};
SweepRequest parse_sweep(const std::string& text);

}  // namespace indiff

#endif
