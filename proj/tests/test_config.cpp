#include <stdexcept>

#include "doctest.h"
#include "spdcfilm/config.hpp"

using namespace spdc;

TEST_SUITE_BEGIN("config");

TEST_CASE("defaults reproduce the headline experiment") {
  const auto c = RunConfig::defaults();
  CHECK(c.film.layer_count == 1);
  CHECK(c.pump.lambda_nm == 775.0);
  CHECK(c.pump.waist == doctest::Approx(10e-6));
  CHECK(c.forward_window.full_width == doctest::Approx(0.2));
  CHECK(c.forward_window.band_nm[0] == 1460.0);
  CHECK(c.forward_window.band_nm[1] == 1650.0);
}

TEST_CASE("round trip through JSON") {
  auto c = RunConfig::defaults();
  c.film.layer_count = 216;
  c.pump.lambda_nm = 780.0;
  c.simulation.seed = 424242;
  const auto text = c.to_json_text();
  const auto back = RunConfig::from_json_text(text);
  CHECK(back.film.layer_count == 216);
  CHECK(back.pump.lambda_nm == 780.0);
  CHECK(back.simulation.seed == 424242);
}

TEST_CASE("validation errors carry the field path") {
  CHECK_THROWS_WITH_AS(
      RunConfig::from_json_text(R"({"pump": {"lambda_nm": -5}})"),
      doctest::Contains("pump.lambda_nm"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      RunConfig::from_json_text(R"({"film": {"layer_count": 0}})"),
      doctest::Contains("film.layer_count"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      RunConfig::from_json_text(R"({"windows": {"band_nm": [1650, 1460]}})"),
      doctest::Contains("windows.band_nm"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      RunConfig::from_json_text(
          R"({"simulation": {"detector_1": {"efficiency": 1.2}}})"),
      doctest::Contains("detector_1.efficiency"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      RunConfig::from_json_text(R"({"tomography": {"noise_p": 2.0}})"),
      doctest::Contains("tomography.noise_p"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text("{bad json"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_file("/no/such/config.json"),
                  std::invalid_argument);
}

TEST_CASE("custom dispersion embeds into the film") {
  const auto c = RunConfig::from_json_text(
      R"({"film": {"dispersion": {"coefficients": [7.84], "range_nm": [500, 2000]}}})");
  CHECK(c.film.dispersion.refractive_index(1000.0) == doctest::Approx(2.8));
}

TEST_SUITE_END();
