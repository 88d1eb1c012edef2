#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "indiff/config.hpp"

using namespace indiff;

namespace {
const char* kFig1Config = R"(
# reference configuration
[model]
type = merton
sigma = 0.2
lambda_m = 5.0
gamma_j = -0.05
delta_j = 0.1
martingale = true

[option]
kind = put
strike = 1.0
maturity = 1.0
spot = 1.0

[grid]
n_time = 40
m_half = 100
k_half = 50
dx = 0.02
x0 = auto
alpha = 10.0

[run]
command = price
format = csv
)";
}  // namespace

TEST_CASE("reference config parses") {
    const RunConfig cfg = RunConfig::from_string(kFig1Config);
    CHECK(cfg.model.merton.intensity == 5.0);
    CHECK(cfg.model.merton.jump_mean == -0.05);
    CHECK(cfg.model.martingale);
    CHECK(cfg.option.kind == OptionKind::put);
    CHECK(cfg.grid.n_time == 40);
    CHECK(cfg.grid.alpha == 10.0);
    CHECK(cfg.grid.x0 == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(cfg.run.command == "price");

    const LevyModel m = cfg.build_model();
    CHECK(m.is_martingale(1e-12));
    const LevyModel q = cfg.pricing_model();   // MEMM tilt is the identity here
    CHECK(q.measure().tilt() == 0.0);
    const GroupParams gp = cfg.group_params();
    CHECK(gp.sigma_bar_sq == doctest::Approx(0.0956069136).epsilon(1e-8));
}

TEST_CASE("atom models parse with drift") {
    const RunConfig cfg = RunConfig::from_string(R"(
[model]
type = atoms
sigma = 0.15
atoms = 0.1:2.0, -0.1:2.0
mu = 0.01
[run]
command = price
)");
    const LevyModel m = cfg.build_model();
    CHECK(m.measure().is_atomic());
    CHECK(m.measure().atom_list().size() == 2);
    // mu is the between-jump drift; mean rate = mu + int x nu = 0.01
    CHECK(m.mean_rate() == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("validation failures carry field paths") {
    CHECK_THROWS_WITH_AS(RunConfig::from_string("[model]\nsigma = abc\n"),
                         doctest::Contains("model.sigma"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(RunConfig::from_string("[grid]\nn_time = 2.5\n"),
                         doctest::Contains("grid.n_time"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(RunConfig::from_string("[model]\nbogus_key = 1\n"),
                         doctest::Contains("model.bogus_key"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(RunConfig::from_string("[nonsense]\na = 1\n"),
                         doctest::Contains("nonsense"), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::from_string("[option]\nkind = swaption\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::from_string("[option]\nstrike = -2\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::from_string("stray = 1\n"), std::invalid_argument);
}

TEST_CASE("sweep requests parse") {
    const SweepRequest r = parse_sweep("spot=0.5:1.5:41");
    CHECK(r.key == "spot");
    CHECK(r.from == 0.5);
    CHECK(r.to == 1.5);
    CHECK(r.count == 41);
    CHECK_THROWS_AS(parse_sweep("spot=1:2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep("spot=1:2:0"), std::invalid_argument);
}

TEST_CASE("x0 auto centres the grid on the strike") {
    RunConfig cfg = RunConfig::from_string(kFig1Config);
    CHECK(cfg.grid.x0 == doctest::Approx(std::log(cfg.option.strike)
                                         - cfg.grid.m_half * cfg.grid.dx));
}
