// Python bindings for the core estimator operations: range selection,
// encoding/estimation, the analytic predictors, and the comparison tables.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ocms/analysis.hpp"
#include "ocms/baselines.hpp"
#include "ocms/cms.hpp"
#include "ocms/hashing.hpp"
#include "ocms/ldp.hpp"
#include "ocms/rng.hpp"

namespace py = pybind11;

namespace {

ocms::RangeMode parse_mode(const std::string& mode) {
  if (mode == "mse") return ocms::RangeMode::MseOpt;
  if (mode == "l") return ocms::RangeMode::LOpt;
  if (mode == "fixed") return ocms::RangeMode::FixedM;
  throw std::invalid_argument("mode must be 'mse', 'l', or 'fixed'");
}

ocms::Algorithm parse_algorithm(const std::string& label) {
  if (label == "HE") return ocms::Algorithm::HE;
  if (label == "RHR") return ocms::Algorithm::RHR;
  if (label == "OLH") return ocms::Algorithm::OLH;
  if (label == "OCMS_MSE") return ocms::Algorithm::OcmsMse;
  if (label == "OCMS_L") return ocms::Algorithm::OcmsL;
  if (label == "CMSHE") return ocms::Algorithm::CmsHe;
  if (label == "SS") return ocms::Algorithm::SS;
  if (label == "aRP") return ocms::Algorithm::ARappor;
  if (label == "RP") return ocms::Algorithm::Rappor;
  if (label == "ORIGINAL_CMS") return ocms::Algorithm::OriginalCms;
  throw std::invalid_argument("unknown algorithm label '" + label + "'");
}

ocms::EstimatorParams params_for(double epsilon, std::uint64_t d,
                                 const std::string& mode, double f_star,
                                 std::uint64_t fixed_m, bool clip) {
  return ocms::make_params(epsilon, d, parse_mode(mode), f_star, fixed_m,
                           clip);
}

}  // namespace

PYBIND11_MODULE(ocms, mod) {
  mod.doc() =
      "Locally private frequency estimation: optimized count-mean sketch "
      "with randomized response, plus analytic predictors and baselines.";

  mod.def(
      "hash_range",
      [](double epsilon, std::uint64_t d, double f_star,
         const std::string& mode) {
        return ocms::hash_range(epsilon, d, f_star, parse_mode(mode));
      },
      py::arg("epsilon"), py::arg("d"), py::arg("f_star"),
      py::arg("mode") = "mse",
      "Loss-minimizing integer hash range for the given mode.");

  mod.def(
      "encode_reports",
      [](const std::vector<std::uint64_t>& values, double epsilon,
         std::uint64_t d, const std::string& mode, double f_star,
         std::uint64_t fixed_m, std::uint64_t seed) {
        ocms::EstimatorParams p =
            params_for(epsilon, d, mode, f_star, fixed_m, false);
        std::vector<std::tuple<std::uint32_t, std::uint64_t, std::uint64_t>>
            out;
        out.reserve(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
          ocms::Rng rng = ocms::stream_rng(seed, 0, 0, i);
          ocms::Report r = ocms::client_encode(values[i], p, rng);
          out.emplace_back(r.z, r.a0, r.a1);
        }
        return out;
      },
      py::arg("values"), py::arg("epsilon"), py::arg("d"),
      py::arg("mode") = "mse", py::arg("f_star") = 1.0,
      py::arg("fixed_m") = 0, py::arg("seed") = 1,
      "Encode one report (z, a0, a1) per value; client i draws from the "
      "stream keyed by (seed, 0, 0, i).");

  mod.def(
      "estimate",
      [](const std::vector<std::uint64_t>& x_set,
         const std::vector<std::tuple<std::uint32_t, std::uint64_t,
                                      std::uint64_t>>& reports,
         double epsilon, std::uint64_t d, const std::string& mode,
         double f_star, std::uint64_t fixed_m, bool clip) {
        ocms::EstimatorParams p =
            params_for(epsilon, d, mode, f_star, fixed_m, clip);
        std::vector<ocms::Report> rs;
        rs.reserve(reports.size());
        for (const auto& [z, a0, a1] : reports)
          rs.push_back(ocms::Report{z, a0, a1});
        return ocms::server_estimate(x_set, rs, p);
      },
      py::arg("x_set"), py::arg("reports"), py::arg("epsilon"), py::arg("d"),
      py::arg("mode") = "mse", py::arg("f_star") = 1.0,
      py::arg("fixed_m") = 0, py::arg("clip") = false,
      "Frequency estimates for each queried item from (z, a0, a1) reports.");

  mod.def("predict_variance", &ocms::predict_variance, py::arg("f"),
          py::arg("epsilon"), py::arg("m"), py::arg("n"),
          "Predicted estimator variance at frequency f, range m, and "
          "population n.");
  mod.def("worst_case_mse", &ocms::worst_case_mse, py::arg("epsilon"),
          py::arg("n"), py::arg("f_star"), py::arg("delta") = 0.0,
          "Worst-case per-item MSE at the MSE-optimal range.");
  mod.def(
      "optimal_losses",
      [](double epsilon, std::uint64_t n, std::uint64_t d) {
        ocms::OptimalLosses ol = ocms::optimal_losses(epsilon, n, d);
        py::dict out;
        out["l2_star"] = ol.l2_star;
        out["l1_upper"] = ol.l1_upper;
        out["l2_limit"] = ol.l2_limit;
        out["l1_limit"] = ol.l1_limit;
        return out;
      },
      py::arg("epsilon"), py::arg("n"), py::arg("d"),
      "Loss bounds at the summed-l2-optimal range.");
  mod.def("concentration_bound", &ocms::concentration_bound, py::arg("alpha"),
          py::arg("epsilon"), py::arg("m"), py::arg("n"),
          "Tail bound on |estimate - f| in units of the standard deviation.");
  mod.def("mse_upper_bound", &ocms::mse_upper_bound, py::arg("variance"),
          py::arg("t"), py::arg("x_count"),
          "High-probability ceiling for an empirical max-MSE.");

  mod.def(
      "theory_table",
      [](const std::string& algorithm, std::uint64_t d, double epsilon,
         std::uint64_t n) {
        ocms::TheoryRow r =
            ocms::theory_table(parse_algorithm(algorithm), d, epsilon, n);
        py::dict out;
        out["l1"] = r.l1;
        out["l2"] = r.l2;
        out["mse"] = r.mse;
        out["mse_is_lower_bound"] = r.mse_is_lower_bound;
        out["small_d_flag"] = r.small_d_flag;
        return out;
      },
      py::arg("algorithm"), py::arg("d"), py::arg("epsilon"), py::arg("n"),
      "Predicted l1/l2/mse for one algorithm label.");
  mod.def(
      "comm_cost",
      [](const std::string& algorithm, std::uint64_t d, double epsilon,
         std::uint64_t m) {
        return ocms::comm_cost(parse_algorithm(algorithm), d, epsilon, m);
      },
      py::arg("algorithm"), py::arg("d"), py::arg("epsilon"),
      py::arg("m") = 0, "Per-report communication cost in bits.");

  mod.def(
      "rr_perturb",
      [](std::uint64_t y, double epsilon, std::uint64_t m,
         std::uint64_t seed) {
        ocms::Rng rng(seed);
        return ocms::rr_perturb(y, epsilon, m, rng);
      },
      py::arg("y"), py::arg("epsilon"), py::arg("m"), py::arg("seed") = 1,
      "One randomized-response draw over an m-ary alphabet.");
  mod.def("rr_decode", &ocms::rr_decode, py::arg("match"), py::arg("epsilon"),
          py::arg("m"), "Unbiased decode of a match indicator.");
  mod.def("hadamard_entry", &ocms::hadamard_entry, py::arg("row"),
          py::arg("col"), "Entry of the power-of-two Hadamard matrix.");

  mod.def(
      "api_stats",
      [](std::uint64_t d, std::uint64_t m) {
        ocms::FieldSpec field = ocms::finite_field_size(d, m);
        ocms::ApiStats st = ocms::api_stats(field, m);
        py::dict out;
        out["q"] = st.q;
        out["r"] = st.r;
        out["c_bar"] = st.c_bar;
        out["m_prime"] = st.m_prime;
        return out;
      },
      py::arg("d"), py::arg("m"),
      "Collision statistics of the affine family over the field sized for "
      "(d, m).");
  mod.def("family_bits", &ocms::family_bits, py::arg("d"), py::arg("m"),
          "Bits to describe one hash function.");
  mod.def("assignment_bits", &ocms::assignment_bits, py::arg("n"),
          py::arg("k"),
          "Bits to assign n clients to k hash functions.");
}
