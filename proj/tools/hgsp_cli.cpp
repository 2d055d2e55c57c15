// Batch command-line surface for the hypergraph signal processing library.
// Inputs and outputs are the textual formats of hgsp/io.hpp; metrics go to
// standard output as key=value lines. Exit codes: 0 success, 1 validation
// error, 2 numerical failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hgsp/hgsp.hpp"

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

hgsp::Spectrum spectrum_from_flags(const std::string& spectrum_path,
                                   const std::string& hypergraph_path,
                                   const hgsp::DecomposeOptions& opts) {
  if (!spectrum_path.empty()) return hgsp::io::load_spectrum(spectrum_path);
  if (!hypergraph_path.empty()) {
    auto h = hgsp::io::load_hypergraph(hypergraph_path);
    return hgsp::decompose(hgsp::adjacency_tensor(h), opts);
  }
  throw hgsp::ValidationError("need --spectrum or --hypergraph");
}

std::vector<double> parse_number_list(const std::string& s, const char* flag) {
  std::vector<double> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    try {
      out.push_back(std::stod(cur));
    } catch (...) {
      throw hgsp::ValidationError(std::string(flag) + ": '" + cur +
                                  "' is not a number");
    }
    cur.clear();
  };
  for (char ch : s) {
    if (ch == ',')
      flush();
    else
      cur += ch;
  }
  flush();
  if (out.empty())
    throw hgsp::ValidationError(std::string(flag) + ": empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hgsp: hypergraph signal processing toolkit"};
  app.require_subcommand(1);

  // Shared option storage; each subcommand registers the flags it honors.
  std::string hypergraph_path, signal_path, spectrum_path, labels_path,
      features_path, output_path, plan_path, compressed_path, reference_path,
      curve_path, coeff_list, gamma_list, form = "matrix";
  int k = 0, q = 0, component = 0, degree = 15, m_neighbors = 3;
  double tol = -1.0, ridge = 1e-3, epsilon = -1.0;
  bool lossless = false;
  hgsp::DecomposeOptions dopts;

  auto add_decompose_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", dopts.seed, "decomposition RNG seed");
    cmd->add_option("--restarts", dopts.restarts, "power-iteration restarts");
    cmd->add_option("--max-iter", dopts.max_iter, "power-iteration cap");
    cmd->add_option("--decompose-tol", dopts.tol, "E-eigenpair residual bound");
  };

  auto* c_spectrum = app.add_subcommand("spectrum", "decompose a hypergraph");
  c_spectrum->add_option("--hypergraph", hypergraph_path)->required();
  c_spectrum->add_option("--output", output_path)->required();
  add_decompose_flags(c_spectrum);

  auto* c_transform = app.add_subcommand("transform", "HGFT of a signal");
  c_transform->add_option("--spectrum", spectrum_path)->required();
  c_transform->add_option("--signal", signal_path)->required();
  c_transform->add_option("--output", output_path)->required();

  auto* c_inverse = app.add_subcommand("inverse", "inverse HGFT");
  c_inverse->add_option("--spectrum", spectrum_path)->required();
  c_inverse->add_option("--signal", signal_path, "spectrum-domain input")->required();
  c_inverse->add_option("--output", output_path)->required();

  auto* c_tv = app.add_subcommand("tv", "total variation");
  c_tv->add_option("--spectrum", spectrum_path)->required();
  c_tv->add_option("--component", component, "1-based frequency component");
  c_tv->add_option("--signal", signal_path, "signal for Eq-30-style TV");
  c_tv->add_option("--hypergraph", hypergraph_path, "tensor for signal TV");

  auto* c_bw = app.add_subcommand("bandwidth", "bandwidth of a signal");
  c_bw->add_option("--spectrum", spectrum_path)->required();
  c_bw->add_option("--signal", signal_path)->required();
  c_bw->add_option("--tol", tol, "relative spectral threshold");

  auto* c_sample = app.add_subcommand("sample", "sample a bandlimited signal");
  c_sample->add_option("--spectrum", spectrum_path)->required();
  c_sample->add_option("--signal", signal_path)->required();
  c_sample->add_option("--k", k, "bandwidth K")->required();
  c_sample->add_option("--q", q, "sample count Q (default K)");
  c_sample->add_option("--output", output_path)->required();
  c_sample->add_option("--plan", plan_path, "write the sampling plan here");

  auto* c_recon = app.add_subcommand("reconstruct", "interpolate from samples");
  c_recon->add_option("--plan", plan_path)->required();
  c_recon->add_option("--signal", signal_path, "sampled values")->required();
  c_recon->add_option("--output", output_path)->required();

  auto* c_filter = app.add_subcommand("filter", "polynomial filter");
  c_filter->add_option("--spectrum", spectrum_path);
  c_filter->add_option("--hypergraph", hypergraph_path);
  c_filter->add_option("--signal", signal_path)->required();
  c_filter->add_option("--coeffs", coeff_list,
                       "comma list; matrix form beta_0.., tensor form alpha_1..")
      ->required();
  c_filter->add_option("--form", form, "matrix|tensor");
  c_filter->add_option("--output", output_path)->required();

  auto* c_denoise = app.add_subcommand("denoise", "closed-form denoising sweep");
  c_denoise->add_option("--hypergraph", hypergraph_path)->required();
  c_denoise->add_option("--signal", signal_path)->required();
  c_denoise->add_option("--gamma", gamma_list, "comma list of gamma values")->required();
  c_denoise->add_option("--reference", reference_path, "score against this signal");
  c_denoise->add_option("--output", output_path)->required();
  c_denoise->add_option("--curve", curve_path, "write gamma,score CSV here");
  add_decompose_flags(c_denoise);

  auto* c_cluster = app.add_subcommand("cluster", "spectral clustering");
  c_cluster->add_option("--hypergraph", hypergraph_path);
  c_cluster->add_option("--spectrum", spectrum_path);
  c_cluster->add_option("--k", k, "number of clusters")->required();
  c_cluster->add_option("--output", output_path)->required();
  hgsp::ClusterOptions copts;
  c_cluster->add_option("--seed", copts.seed);
  c_cluster->add_option("--restarts", copts.restarts);

  auto* c_classify = app.add_subcommand("classify", "LP-HGSP classification");
  c_classify->add_option("--hypergraph", hypergraph_path);
  c_classify->add_option("--spectrum", spectrum_path);
  c_classify->add_option("--labels", labels_path)->required();
  c_classify->add_option("--degree", degree, "filter degree (default 15)");
  c_classify->add_option("--ridge", ridge, "ridge regularization");
  c_classify->add_option("--output", output_path)->required();
  add_decompose_flags(c_classify);

  auto* c_compress = app.add_subcommand("compress", "spectrum compression");
  c_compress->add_option("--spectrum", spectrum_path)->required();
  c_compress->add_option("--signal", signal_path)->required();
  c_compress->add_flag("--lossless", lossless, "retain the full bandwidth");
  c_compress->add_option("--epsilon", epsilon, "retained-energy tolerance");
  c_compress->add_option("--tol", tol, "lossless bandwidth threshold");
  c_compress->add_option("--output", output_path)->required();

  auto* c_decompress = app.add_subcommand("decompress", "reconstruct a signal");
  c_decompress->add_option("--compressed", compressed_path)->required();
  c_decompress->add_option("--spectrum", spectrum_path)->required();
  c_decompress->add_option("--output", output_path)->required();

  auto* c_build = app.add_subcommand("build-hypergraph",
                                     "k-NN hypergraph from a feature CSV");
  c_build->add_option("--features", features_path)->required();
  c_build->add_option("--m", m_neighbors, "hyperedge cardinality (default 3)");
  c_build->add_option("--output", output_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*c_spectrum) {
      auto h = hgsp::io::load_hypergraph(hypergraph_path);
      auto sp = hgsp::decompose(hgsp::adjacency_tensor(h), dopts);
      hgsp::io::save_spectrum(output_path, sp);
      std::cout << "rank=" << sp.rank() << "\n";
      std::cout << "residual=" << fmt(sp.residual()) << "\n";
    } else if (*c_transform) {
      auto sp = hgsp::io::load_spectrum(spectrum_path);
      auto s = hgsp::io::load_signal(signal_path);
      hgsp::io::save_signal(output_path, hgsp::hgft(sp, s));
    } else if (*c_inverse) {
      auto sp = hgsp::io::load_spectrum(spectrum_path);
      auto shat = hgsp::io::load_signal(signal_path);
      hgsp::io::save_signal(output_path, hgsp::ihgft(sp, shat));
    } else if (*c_tv) {
      auto sp = hgsp::io::load_spectrum(spectrum_path);
      if (component > 0) {
        std::cout << "tv=" << fmt(hgsp::total_variation_component(sp, component))
                  << "\n";
      } else if (!signal_path.empty()) {
        if (hypergraph_path.empty())
          throw hgsp::ValidationError("tv --signal also needs --hypergraph");
        auto h = hgsp::io::load_hypergraph(hypergraph_path);
        auto s = hgsp::io::load_signal(signal_path);
        std::cout << "tv="
                  << fmt(hgsp::total_variation_signal(hgsp::adjacency_tensor(h),
                                                      sp.coeffs()[0], s))
                  << "\n";
      } else {
        throw hgsp::ValidationError("tv: need --component or --signal");
      }
    } else if (*c_bw) {
      auto sp = hgsp::io::load_spectrum(spectrum_path);
      auto s = hgsp::io::load_signal(signal_path);
      const int bw = tol >= 0 ? hgsp::bandwidth(sp, s, tol) : hgsp::bandwidth(sp, s);
      std::cout << "k=" << bw << "\n";
      std::cout << "w=" << fmt(bw > 0 ? sp.coeffs()[bw - 1] : 0.0) << "\n";
    } else if (*c_sample) {
      auto sp = hgsp::io::load_spectrum(spectrum_path);
      auto s = hgsp::io::load_signal(signal_path);
      auto plan = hgsp::build_plan(sp, k, q > 0 ? q : k);
      hgsp::io::save_signal(output_path, hgsp::sample(plan, s));
      if (!plan_path.empty()) hgsp::io::save_plan(plan_path, plan);
      std::cout << "q=";
      for (std::size_t i = 0; i < plan.q.size(); ++i)
        std::cout << (i ? "," : "") << plan.q[i] + 1;
      std::cout << "\n";
    } else if (*c_recon) {
      auto plan = hgsp::io::load_plan(plan_path);
      auto sq = hgsp::io::load_signal(signal_path);
      hgsp::io::save_signal(output_path, hgsp::interpolate(plan, sq));
    } else if (*c_filter) {
      auto s = hgsp::io::load_signal(signal_path);
      auto coeffs = parse_number_list(coeff_list, "--coeffs");
      if (form == "matrix") {
        auto sp = spectrum_from_flags(spectrum_path, hypergraph_path, dopts);
        hgsp::io::save_signal(
            output_path,
            hgsp::apply_matrix_poly(sp, hgsp::PolySpec::matrix_form(coeffs), s));
      } else if (form == "tensor") {
        if (hypergraph_path.empty())
          throw hgsp::ValidationError("filter --form tensor needs --hypergraph");
        auto h = hgsp::io::load_hypergraph(hypergraph_path);
        hgsp::io::save_signal(
            output_path,
            hgsp::apply_tensor_poly(hgsp::adjacency_tensor(h),
                                    hgsp::PolySpec::tensor_form(coeffs), s));
      } else {
        throw hgsp::ValidationError("filter: --form must be matrix or tensor");
      }
    } else if (*c_denoise) {
      auto h = hgsp::io::load_hypergraph(hypergraph_path);
      auto y = hgsp::io::load_signal(signal_path);
      std::optional<hgsp::Signal> ref;
      if (!reference_path.empty()) ref = hgsp::io::load_signal(reference_path);
      auto res = hgsp::denoise_pipeline(
          h, y, parse_number_list(gamma_list, "--gamma"), ref, dopts);
      hgsp::io::save_signal(output_path, res.signal);
      std::cout << "gamma=" << fmt(res.gamma) << "\n";
      if (!curve_path.empty()) {
        std::ofstream out(curve_path);
        if (!out) throw hgsp::ValidationError("cannot write file: " + curve_path);
        out << "gamma,score\n";
        for (auto [g, sc] : res.curve) out << fmt(g) << "," << fmt(sc) << "\n";
      }
    } else if (*c_cluster) {
      auto sp = spectrum_from_flags(spectrum_path, hypergraph_path, dopts);
      auto res = hgsp::spectral_cluster(sp, k, copts);
      std::ofstream out(output_path);
      if (!out) throw hgsp::ValidationError("cannot write file: " + output_path);
      for (std::size_t i = 0; i < res.assignments.size(); ++i)
        out << (i + 1) << " " << res.assignments[i] << "\n";
      std::cout << "intra_variance=" << fmt(res.intra_variance) << "\n";
      std::cout << "silhouette=" << fmt(res.silhouette) << "\n";
    } else if (*c_classify) {
      auto sp = spectrum_from_flags(spectrum_path, hypergraph_path, dopts);
      auto labels = hgsp::io::load_labels(labels_path, sp.dim());
      auto model = hgsp::lp_hgsp_train(sp, labels, degree, ridge);
      hgsp::io::save_labels(output_path, hgsp::lp_hgsp_classify(model, labels));
    } else if (*c_compress) {
      auto sp = hgsp::io::load_spectrum(spectrum_path);
      auto s = hgsp::io::load_signal(signal_path);
      if (lossless == (epsilon >= 0))
        throw hgsp::ValidationError("compress: pass exactly one of --lossless, --epsilon");
      auto mode = lossless ? hgsp::CompressMode::lossless_mode()
                           : hgsp::CompressMode::energy_mode(epsilon);
      auto c = tol >= 0 ? hgsp::compress(sp, s, mode, tol)
                        : hgsp::compress(sp, s, mode);
      hgsp::io::save_compressed(output_path, c);
      std::cout << "k=" << c.bandwidth << "\n";
      std::cout << "cr=" << fmt(c.compression_ratio()) << "\n";
      std::cout << "mse=" << fmt(c.mse) << "\n";
    } else if (*c_decompress) {
      auto sp = hgsp::io::load_spectrum(spectrum_path);
      auto c = hgsp::io::load_compressed(compressed_path);
      hgsp::io::save_signal(output_path, hgsp::decompress(c, sp));
    } else if (*c_build) {
      auto table = hgsp::io::load_features_csv(features_path);
      auto h = hgsp::build_knn_hypergraph(table.features, m_neighbors);
      hgsp::io::save_hypergraph(output_path, h);
      std::cout << "num_nodes=" << h.num_nodes() << "\n";
      std::cout << "num_hyperedges=" << h.hyperedges().size() << "\n";
      std::cout << "mce=" << h.mce() << "\n";
    }
  } catch (const hgsp::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hgsp::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
