// Generates a small two-field corpus, runs the whole analysis in memory and
// prints how far the bibliometric rankings drift from FSS in each field.

#include <cstdio>

#include "prodrank/prodrank.hpp"

int main() {
  using namespace prodrank;

  auto config = synth::paper_like_preset(7);
  config.fields.resize(2);  // MAT/05 and INF/01
  config.cross_field_copub_rate = 0.0;
  const auto corpus = synth::generate_corpus(config);

  AnalysisConfig analysis;
  analysis.window = config.window;
  const auto result = run_analysis(corpus.registry, corpus.publications, analysis);

  for (const auto& field : result.comparisons.sds) {
    std::printf("%s\n", field.sds.c_str());
    for (const auto& p : field.pairs) {
      std::printf("  %-9s rho %s  shifted %zu of %zu  mean shift %.2f\n", pair_label(p.pair).c_str(),
                  p.rho ? std::to_string(*p.rho).c_str() : "undefined", p.shifts.shifted_ge1, p.shifts.n,
                  p.shifts.mean_shift());
    }
    for (const auto& o : field.overlaps) {
      if (o.from != Indicator::fss || o.to != Indicator::h) continue;
      std::printf("  top FSS researchers also top by h: %zu of %zu\n", o.intersection, o.size_from);
    }
  }
}
