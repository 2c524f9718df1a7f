// SPDX-License-Identifier: Apache-2.0

#include "ringlink/cli/recipes.hpp"

#include "ringlink/cli/config.hpp"
#include "ringlink/common.hpp"

namespace ringlink::cli {

namespace {

const double kTeHz = wavelength_to_frequency(1550.47e-9);

Json with_ring(Json ring, const char* section, Json body) {
  return Json{{"schema_version", kSchemaVersion}, {"ring", std::move(ring)},
              {section, std::move(body)}};
}

Json sweep(const char* param, double start, double stop, int points, const char* pipeline,
           Json body) {
  return Json{{"param", param}, {"start", start}, {"stop", stop}, {"points", points},
              {"pipeline", pipeline}, {pipeline, std::move(body)}};
}

std::vector<Recipe> build() {
  const Json ring = reference_ring();
  std::vector<Recipe> out;

  Json physical = {{"form", "physical"}, {"radius_m", 592e-6},
                   {"n_eff_te", 1.627},  {"n_eff_tm", 1.624},
                   {"t", 0.9965},        {"a", 0.9982},
                   {"t_ref_c", 23.0}};
  out.push_back({"fsr-physical", "spectrum",
                 "device geometry: comb spacing from a 592 um radius and the mode indices",
                 "fsr-consistency",
                 with_ring(physical, "spectrum",
                           {{"f_start_hz", wavelength_to_frequency(1551e-9)},
                            {"f_stop_hz", wavelength_to_frequency(1549e-9)},
                            {"points", 4001}})});

  out.push_back({"fig2", "spectrum",
                 "figure 2: through/drop transmission of both modes and the 140 MHz linewidth",
                 "q-factor",
                 with_ring(ring, "spectrum",
                           {{"f_start_hz", kTeHz - 10e9},
                            {"f_stop_hz", kTeHz + 40e9},
                            {"points", 5001}})});

  out.push_back({"fig2-fit", "fit",
                 "figure 2(b): linewidth extraction, here from a synthetic 40 dB SNR trace",
                 "fit-round-trip",
                 with_ring(ring, "fit",
                           {{"synthetic",
                             {{"pol", "te"}, {"port", "through"}, {"half_span_hz", 1.5e9},
                              {"points", 801}, {"calibrated", true}, {"snr_db", 40.0},
                              {"seed", 1}}}})});

  out.push_back({"fig3", "sweep-temp",
                 "figure 3: resonance positions and TE/TM interval from 23 C to 30 C",
                 "thermal-model",
                 with_ring(ring, "sweep",
                           sweep("temperature_c", 23.0, 30.0, 8, "spectrum",
                                 {{"f_start_hz", kTeHz - 22e9},
                                  {"f_stop_hz", kTeHz + 38e9},
                                  {"points", 601}}))});

  out.push_back({"fig5", "ossb",
                 "figure 5: orthogonally polarized single sideband at the drop port, 16.6 GHz drive",
                 "sideband-suppression",
                 with_ring(ring, "ossb",
                           {{"carrier_anchor", "te"}, {"rf_freq_hz", 16.6e9},
                            {"launch_angle_deg", 45.0}})});

  out.push_back({"fig7", "sweep-theta",
                 "figures 6-7: carrier-to-sideband ratio versus polarizer angle, 2 to 92 deg",
                 "ocsr-law",
                 with_ring(ring, "sweep",
                           sweep("theta_deg", 2.0, 92.0, 46, "ossb",
                                 {{"carrier_anchor", "tm"}, {"rf_freq_hz", 16.6e9},
                                  {"launch_angle_deg", 45.0}, {"polarizer_deg", 45.0}}))});

  out.push_back({"fig8", "sweep-theta",
                 "figure 8(b): tunable-OCSR sideband at 32.4 GHz (FSR minus mode interval)",
                 "none",
                 with_ring(ring, "sweep",
                           sweep("theta_deg", 2.0, 92.0, 46, "ossb",
                                 {{"carrier_anchor", "te"}, {"rf_freq_hz", 32.4e9},
                                  {"launch_angle_deg", 45.0}, {"polarizer_deg", 45.0}}))});

  out.push_back({"fig10", "equalizer",
                 "figure 10: single RF passband with TM-polarized input",
                 "passband-width",
                 with_ring(ring, "equalizer",
                           {{"carrier_anchor", "te"}, {"carrier_offset_hz", 5.9e9},
                            {"input_angle_deg", 90.0}, {"rf_points", 401}})});

  out.push_back({"fig11", "sweep-temp",
                 "figure 11(b): single passband tuned by chip temperature, 23 C to 27 C",
                 "none",
                 with_ring(ring, "sweep",
                           sweep("temperature_c", 23.0, 27.0, 5, "equalizer",
                                 {{"carrier_anchor", "te"}, {"carrier_offset_hz", 5.9e9},
                                  {"input_angle_deg", 90.0}, {"rf_points", 101}}))});

  out.push_back({"fig12", "sweep-carrier",
                 "figure 12(a-b): TE and TM passband centers tracking the carrier over 14.6 GHz",
                 "passband-tracking",
                 with_ring(ring, "sweep",
                           sweep("carrier_offset_hz", 1.0e9, 15.6e9, 147, "equalizer",
                                 {{"carrier_anchor", "te"}, {"carrier_offset_hz", 1.0e9},
                                  {"input_angle_deg", 45.0}, {"rf_points", 51}}))});

  out.push_back({"fig13", "sweep-theta",
                 "figure 13(b): extinction ratio between TE and TM passbands 4.8 GHz apart",
                 "er-dynamic-range",
                 with_ring(ring, "sweep",
                           sweep("theta_deg", 2.0, 88.0, 44, "equalizer",
                                 {{"carrier_anchor", "te"}, {"carrier_offset_hz", 5.9e9},
                                  {"input_angle_deg", 45.0}, {"rf_points", 51}}))});
  return out;
}

}  // namespace

Json reference_ring() {
  return {{"form", "spectral"},
          {"f0_te_hz", kTeHz},
          {"f0_tm_hz", kTeHz + 16.6e9},
          {"fsr_te_hz", 49e9},
          {"fsr_tm_hz", 49e9},
          {"fwhm_hz", 140e6},
          {"t_ref_c", 23.0},
          {"thermal_rate_te_hz_per_c", 1.77e9},
          {"thermal_rate_tm_hz_per_c", 1.67e9}};
}

const std::vector<Recipe>& recipes() {
  static const std::vector<Recipe> all = build();
  return all;
}

const Recipe* find_recipe(std::string_view name) {
  for (const auto& r : recipes()) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

}  // namespace ringlink::cli
