#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "prodrank/baseline.hpp"
#include "prodrank/corpus.hpp"
#include "prodrank/error.hpp"

namespace prodrank::synth {

/// Samplers over raw mt19937_64 output. The std:: distributions are
/// implementation-defined, which would make corpora differ across standard
/// libraries for the same seed.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(static_cast<double>(span) * uniform());
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller; one variate per call.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Poisson; inversion by multiplication for small means, rounded normal
  /// approximation above 30.
  std::int64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 30.0) return std::max<std::int64_t>(0, std::llround(mean + std::sqrt(mean) * normal()));
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }

  /// Mean-one lognormal multiplier with log-scale spread `sigma`.
  double unit_lognormal(double sigma) {
    if (sigma <= 0.0) return 1.0;
    return std::exp(sigma * normal() - 0.5 * sigma * sigma);
  }

 private:
  std::mt19937_64 engine_;
};

enum class CitationLaw {
  lognormal,   // floor(exp(ln(scale) + sigma Z)); `scale` is the median before flooring
  power_law,   // floor(scale ((1 - U)^(-1/alpha) - 1)), a shifted Pareto
};

struct FieldProfile {
  std::string sds;
  std::string uda;
  int n_researchers = 0;
  double pub_rate = 0.0;             // mean in-window publications led per publishing researcher
  double productivity_sigma = 0.5;   // spread of per-researcher output around pub_rate
  double citation_scale = 1.0;
  double citation_sigma = 1.0;       // lognormal law
  double citation_alpha = 1.5;       // power law
  double coauthor_mean = 1.0;        // mean byline size (>= 1)
  double coauthor_dispersion = 0.0;  // spread of per-researcher team size around coauthor_mean
  std::vector<std::string> categories;
  std::vector<double> category_scale;  // citation multiplier per category; empty = all 1
  double unpublished_frac = 0.0;
  double uncited_frac = 0.0;
  double unstable_frac = 0.0;          // researchers entering or leaving during the window
  double internal_coauthor_rate = 0.05;  // chance a co-author slot holds a colleague of the same sds
};

struct SynthConfig {
  std::uint64_t seed = 1;
  AnalysisWindow window;
  std::vector<FieldProfile> fields;
  double cross_field_copub_rate = 0.0;
  double multi_category_rate = 0.0;
  CitationLaw citation_law = CitationLaw::lognormal;
  int n_universities = 60;
  double intramural_rate = 0.5;  // chance a non-corpus co-author shares the lead's university
};

inline void validate(const SynthConfig& config) {
  try {
    config.window.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(e.what());
  }
  auto fail = [](const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); };
  auto fraction = [&](const std::string& where, double v) {
    if (!(v >= 0.0 && v <= 1.0)) fail(where, "must lie in [0, 1]");
  };
  auto non_negative = [&](const std::string& where, double v) {
    if (!(v >= 0.0)) fail(where, "must be >= 0");
  };
  if (config.fields.empty()) fail("fields", "at least one field is required");
  if (config.n_universities < 1) fail("n_universities", "must be >= 1");
  fraction("cross_field_copub_rate", config.cross_field_copub_rate);
  fraction("multi_category_rate", config.multi_category_rate);
  fraction("intramural_rate", config.intramural_rate);
  std::set<std::string> sds_seen;
  int total = 0, populated = 0;
  for (std::size_t i = 0; i < config.fields.size(); ++i) {
    const auto& f = config.fields[i];
    const std::string at = "fields[" + std::to_string(i) + "]";
    if (f.sds.empty()) fail(at + ".sds", "must not be empty");
    if (f.uda.empty()) fail(at + ".uda", "must not be empty");
    if (!sds_seen.insert(f.sds).second) fail(at + ".sds", "duplicate sds '" + f.sds + "'");
    if (f.n_researchers < 0) fail(at + ".n_researchers", "must be >= 0");
    non_negative(at + ".pub_rate", f.pub_rate);
    non_negative(at + ".productivity_sigma", f.productivity_sigma);
    non_negative(at + ".citation_sigma", f.citation_sigma);
    non_negative(at + ".coauthor_dispersion", f.coauthor_dispersion);
    if (!(f.citation_scale > 0.0)) fail(at + ".citation_scale", "must be > 0");
    if (!(f.citation_alpha > 0.0)) fail(at + ".citation_alpha", "must be > 0");
    if (!(f.coauthor_mean >= 1.0)) fail(at + ".coauthor_mean", "must be >= 1");
    if (f.categories.empty()) fail(at + ".categories", "must not be empty");
    if (!f.category_scale.empty() && f.category_scale.size() != f.categories.size()) {
      fail(at + ".category_scale", "must match categories in length");
    }
    for (double s : f.category_scale) {
      if (!(s > 0.0)) fail(at + ".category_scale", "entries must be > 0");
    }
    fraction(at + ".unpublished_frac", f.unpublished_frac);
    fraction(at + ".uncited_frac", f.uncited_frac);
    fraction(at + ".unstable_frac", f.unstable_frac);
    fraction(at + ".internal_coauthor_rate", f.internal_coauthor_rate);
    total += f.n_researchers;
    populated += f.n_researchers > 0;
  }
  if (total == 0) fail("fields", "no researchers to generate");
  if (config.cross_field_copub_rate > 0.0 && populated < 2) {
    fail("cross_field_copub_rate", "needs at least two populated fields");
  }
}

struct Corpus {
  Registry registry;
  PublicationSet publications;
};

namespace detail {

inline std::string numbered(char prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, n);
  return buf;
}

inline DocType draw_doc_type(Sampler& rng) {
  const double u = rng.uniform();
  if (u < 0.80) return DocType::article;
  if (u < 0.85) return DocType::review;
  return DocType::proceedings;
}

}  // namespace detail

/// Generates a corpus. The same config (seed included) always yields the
/// same corpus; generation is single-threaded by design of the sampler.
inline Corpus generate_corpus(const SynthConfig& config) {
  validate(config);
  Sampler rng(config.seed);
  const auto& w = config.window;
  const int univ_width = config.n_universities >= 1000 ? 4 : 3;
  auto random_university = [&] {
    return detail::numbered('U', static_cast<std::size_t>(rng.uniform_int(1, config.n_universities)), univ_width);
  };

  enum class Status { unpublished, uncited, cited };
  struct Person {
    std::size_t field;
    Status status;
    double activity;
    double collaboration;
    std::size_t home_category;
  };

  Corpus corpus;
  std::vector<Person> people;
  std::vector<std::vector<std::size_t>> cited_by_field(config.fields.size());
  std::size_t next_id = 1;
  for (std::size_t fi = 0; fi < config.fields.size(); ++fi) {
    const auto& f = config.fields[fi];
    for (int i = 0; i < f.n_researchers; ++i) {
      ResearcherRecord r;
      r.researcher_id = detail::numbered('R', next_id++, 5);
      r.sds = f.sds;
      r.uda = f.uda;
      r.university_id = random_university();
      r.role = static_cast<Role>(rng.uniform_int(0, 2));
      if (rng.bernoulli(f.unstable_frac)) {
        if (rng.bernoulli(0.5)) {  // entered during the window
          r.active_from = static_cast<int>(rng.uniform_int(w.pub_year_from + 1, w.pub_year_to + 1));
          r.active_to = r.active_from + static_cast<int>(rng.uniform_int(0, 15));
        } else {  // left during the window
          r.active_to = static_cast<int>(rng.uniform_int(w.pub_year_from - 1, w.pub_year_to - 1));
          r.active_from = r.active_to - static_cast<int>(rng.uniform_int(0, 20));
        }
      } else {
        r.active_from = w.pub_year_from - static_cast<int>(rng.uniform_int(0, 20));
        r.active_to = w.pub_year_to + static_cast<int>(rng.uniform_int(0, 15));
      }
      Person p{fi, Status::cited, 1.0, 1.0, 0};
      if (f.pub_rate == 0.0 || rng.bernoulli(f.unpublished_frac)) {
        p.status = Status::unpublished;
      } else if (rng.bernoulli(f.uncited_frac)) {
        p.status = Status::uncited;
      }
      p.activity = rng.unit_lognormal(f.productivity_sigma);
      p.collaboration = rng.unit_lognormal(f.coauthor_dispersion);
      p.home_category = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(f.categories.size()) - 1));
      if (p.status == Status::cited) cited_by_field[fi].push_back(people.size());
      people.push_back(p);
      corpus.registry.add(std::move(r));
    }
  }

  const auto& researchers = corpus.registry.records();
  std::size_t next_pub = 1;
  for (std::size_t pi = 0; pi < people.size(); ++pi) {
    const auto& person = people[pi];
    if (person.status == Status::unpublished) continue;
    const auto& f = config.fields[person.field];
    const auto& lead = researchers[pi];
    const auto n_pubs = 1 + rng.poisson(std::max(0.0, f.pub_rate * person.activity - 1.0));
    for (std::int64_t k = 0; k < n_pubs; ++k) {
      PublicationRecord pub;
      pub.publication_id = detail::numbered('P', next_pub++, 6);
      pub.year = static_cast<int>(rng.uniform_int(w.pub_year_from, w.pub_year_to));
      pub.doc_type = detail::draw_doc_type(rng);

      const auto n_cat = static_cast<std::int64_t>(f.categories.size());
      std::size_t cat = person.home_category;
      if (n_cat > 1 && !rng.bernoulli(0.7)) cat = static_cast<std::size_t>(rng.uniform_int(0, n_cat - 1));
      pub.subject_categories.push_back(f.categories[cat]);
      if (n_cat > 1 && rng.bernoulli(config.multi_category_rate)) {
        auto other = static_cast<std::size_t>(rng.uniform_int(0, n_cat - 2));
        if (other >= cat) ++other;
        pub.subject_categories.push_back(f.categories[other]);
      }

      const auto s = std::min<std::int64_t>(
          1000, 1 + rng.poisson(std::max(0.0, f.coauthor_mean * person.collaboration - 1.0)));
      const auto lead_pos = rng.uniform_int(1, s);
      std::vector<std::optional<std::size_t>> members(static_cast<std::size_t>(s));
      members[static_cast<std::size_t>(lead_pos - 1)] = pi;
      std::set<std::size_t> used = {pi};
      if (person.status == Status::cited && s > 1) {
        const auto& colleagues = cited_by_field[person.field];
        for (std::int64_t pos = 1; pos <= s; ++pos) {
          if (pos == lead_pos || !rng.bernoulli(f.internal_coauthor_rate) || colleagues.size() < 2) continue;
          const auto pick = colleagues[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(colleagues.size()) - 1))];
          if (used.insert(pick).second) members[static_cast<std::size_t>(pos - 1)] = pick;
        }
        if (rng.bernoulli(config.cross_field_copub_rate)) {
          std::vector<std::size_t> others;
          for (std::size_t fj = 0; fj < cited_by_field.size(); ++fj) {
            if (fj != person.field && !cited_by_field[fj].empty()) others.push_back(fj);
          }
          if (!others.empty()) {
            const auto fj = others[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(others.size()) - 1))];
            const auto& pool = cited_by_field[fj];
            const auto pick = pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
            auto pos = rng.uniform_int(1, s - 1);
            if (pos >= lead_pos) ++pos;
            auto& slot = members[static_cast<std::size_t>(pos - 1)];
            if (slot) used.erase(*slot);
            if (used.insert(pick).second) slot = pick;
          }
        }
      }
      for (std::int64_t pos = 1; pos <= s; ++pos) {
        AuthorSlot slot;
        slot.position = static_cast<int>(pos);
        if (const auto& m = members[static_cast<std::size_t>(pos - 1)]) {
          slot.researcher_id = researchers[*m].researcher_id;
          slot.university_id = researchers[*m].university_id;
        } else {
          slot.university_id = rng.bernoulli(config.intramural_rate) ? lead.university_id : random_university();
        }
        pub.byline.push_back(std::move(slot));
      }

      if (person.status == Status::cited) {
        const double scale = f.citation_scale * (f.category_scale.empty() ? 1.0 : f.category_scale[cat]);
        double c = 0.0;
        if (config.citation_law == CitationLaw::lognormal) {
          c = std::exp(std::log(scale) + f.citation_sigma * rng.normal());
        } else {
          c = scale * (std::pow(1.0 - rng.uniform(), -1.0 / f.citation_alpha) - 1.0);
        }
        pub.citations = static_cast<std::int64_t>(std::min(c, 1e9));
      }
      corpus.publications.push_back(std::move(pub));
    }
  }
  return corpus;
}

struct FieldSummary {
  std::string sds;
  std::size_t researchers = 0;
  std::size_t unpublished = 0;  // no in-window publication at all
  std::size_t uncited = 0;      // publications, none cited
  std::size_t publications = 0; // led or co-authored, counted once per field
  double mean_byline = 0.0;
  double median_citations = 0.0;  // over cited publications
};

/// Realized per-field statistics of a corpus.
inline std::vector<FieldSummary> summarize(const Corpus& corpus, const AnalysisWindow& window) {
  PublicationIndex index(corpus.publications, window);
  std::map<std::string, FieldSummary> by_sds;
  std::map<std::string, std::set<std::size_t>> pubs_by_sds;
  for (const auto& r : corpus.registry) {
    auto& s = by_sds[r.sds];
    s.sds = r.sds;
    ++s.researchers;
    const auto& mine = index.of(r.researcher_id);
    if (mine.empty()) {
      ++s.unpublished;
      continue;
    }
    std::int64_t total = 0;
    for (auto i : mine) {
      total += corpus.publications[i].citations;
      pubs_by_sds[r.sds].insert(i);
    }
    if (total == 0) ++s.uncited;
  }
  std::vector<FieldSummary> out;
  for (auto& [sds, s] : by_sds) {
    const auto& pubs = pubs_by_sds[sds];
    s.publications = pubs.size();
    std::vector<std::int64_t> cited;
    double bylines = 0.0;
    for (auto i : pubs) {
      bylines += static_cast<double>(corpus.publications[i].byline.size());
      if (corpus.publications[i].citations > 0) cited.push_back(corpus.publications[i].citations);
    }
    if (!pubs.empty()) s.mean_byline = bylines / static_cast<double>(pubs.size());
    if (!cited.empty()) s.median_citations = median(std::move(cited));
    out.push_back(std::move(s));
  }
  return out;
}

/// Ten fields from low-collaboration, low-citation (mathematics-like) to
/// high-collaboration, heavy-tailed (physics-like); about 2,000 researchers
/// and 10,000 publications. UDA codes follow the Italian area numbering.
inline SynthConfig paper_like_preset(std::uint64_t seed = 1) {
  SynthConfig c;
  c.seed = seed;
  c.cross_field_copub_rate = 0.03;
  c.multi_category_rate = 0.15;
  c.n_universities = 60;
  c.intramural_rate = 0.5;
  auto field = [](std::string sds, std::string uda, int n, double pub_rate, double cit_scale, double cit_sigma,
                  double coauthors, double dispersion, std::vector<std::string> cats, std::vector<double> cat_scale,
                  double unpublished, double uncited) {
    FieldProfile f;
    f.sds = std::move(sds);
    f.uda = std::move(uda);
    f.n_researchers = n;
    f.pub_rate = pub_rate;
    f.citation_scale = cit_scale;
    f.citation_sigma = cit_sigma;
    f.coauthor_mean = coauthors;
    f.coauthor_dispersion = dispersion;
    f.categories = std::move(cats);
    f.category_scale = std::move(cat_scale);
    f.unpublished_frac = unpublished;
    f.uncited_frac = uncited;
    f.unstable_frac = 0.15;
    return f;
  };
  c.fields = {
      field("MAT/05", "01", 170, 4.0, 2.0, 0.8, 2.2, 0.15, {"Mathematics", "Mathematics, Applied"}, {1.0, 1.2}, 0.20, 0.08),
      field("INF/01", "01", 190, 5.0, 2.5, 1.0, 3.0, 0.3, {"Computer Science, Theory", "Computer Science, AI"}, {1.0, 1.5},
            0.20, 0.06),
      field("FIS/01", "02", 260, 9.0, 6.0, 1.3, 20.0, 1.2,
            {"Physics, Multidisciplinary", "Physics, Nuclear", "Physics, Particles & Fields", "Astronomy & Astrophysics"},
            {0.5, 1.0, 2.2, 3.5}, 0.08, 0.03),
      field("FIS/03", "02", 230, 7.0, 5.0, 1.2, 7.0, 0.8,
            {"Physics, Condensed Matter", "Physics, Applied", "Optics"}, {1.5, 0.8, 0.6}, 0.10, 0.03),
      field("CHIM/06", "03", 250, 6.0, 5.0, 0.9, 4.5, 0.3, {"Chemistry, Organic", "Chemistry, Medicinal"}, {1.0, 1.2},
            0.08, 0.03),
      field("GEO/04", "04", 150, 3.5, 3.0, 1.0, 4.0, 0.4, {"Geosciences, Multidisciplinary", "Geography, Physical"},
            {1.0, 0.8}, 0.25, 0.08),
      field("BIO/10", "05", 230, 6.0, 7.0, 1.0, 6.0, 0.4, {"Biochemistry & Molecular Biology", "Cell Biology"}, {1.0, 1.4},
            0.10, 0.04),
      field("MED/31", "06", 132, 3.0, 3.0, 1.1, 6.0, 0.4, {"Otorhinolaryngology", "Surgery"}, {1.0, 1.3}, 0.23, 0.05),
      field("AGR/02", "07", 150, 3.5, 3.0, 1.0, 5.0, 0.3, {"Agronomy", "Plant Sciences"}, {1.0, 1.5}, 0.22, 0.07),
      field("ING-IND/10", "09", 170, 4.0, 2.5, 1.1, 3.5, 0.3, {"Thermodynamics", "Energy & Fuels"}, {1.0, 1.3}, 0.22, 0.08),
  };
  return c;
}

// Structured-text (JSON) configuration.

inline std::string_view to_string(CitationLaw law) { return law == CitationLaw::lognormal ? "lognormal" : "power_law"; }

inline nlohmann::ordered_json to_json(const SynthConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["window"] = {{"pub_year_from", c.window.pub_year_from},
                 {"pub_year_to", c.window.pub_year_to},
                 {"census_date", c.window.census_date}};
  j["cross_field_copub_rate"] = c.cross_field_copub_rate;
  j["multi_category_rate"] = c.multi_category_rate;
  j["citation_law"] = std::string(to_string(c.citation_law));
  j["n_universities"] = c.n_universities;
  j["intramural_rate"] = c.intramural_rate;
  auto fields = nlohmann::ordered_json::array();
  for (const auto& f : c.fields) {
    nlohmann::ordered_json o;
    o["sds"] = f.sds;
    o["uda"] = f.uda;
    o["n_researchers"] = f.n_researchers;
    o["pub_rate"] = f.pub_rate;
    o["productivity_sigma"] = f.productivity_sigma;
    o["citation_scale"] = f.citation_scale;
    o["citation_sigma"] = f.citation_sigma;
    o["citation_alpha"] = f.citation_alpha;
    o["coauthor_mean"] = f.coauthor_mean;
    o["coauthor_dispersion"] = f.coauthor_dispersion;
    o["categories"] = f.categories;
    o["category_scale"] = f.category_scale;
    o["unpublished_frac"] = f.unpublished_frac;
    o["uncited_frac"] = f.uncited_frac;
    o["unstable_frac"] = f.unstable_frac;
    o["internal_coauthor_rate"] = f.internal_coauthor_rate;
    fields.push_back(std::move(o));
  }
  j["fields"] = std::move(fields);
  return j;
}

namespace detail {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + key + ": wrong type");
  }
}

}  // namespace detail

/// Parses a configuration; absent keys keep their defaults, unknown keys are
/// rejected. Validation runs afterwards.
inline SynthConfig from_json(const nlohmann::json& j) {
  static const std::set<std::string> top_keys = {"seed",           "window",          "cross_field_copub_rate",
                                                 "multi_category_rate", "citation_law", "n_universities",
                                                 "intramural_rate", "fields"};
  static const std::set<std::string> field_keys = {
      "sds",           "uda",           "n_researchers",    "pub_rate",     "productivity_sigma",
      "citation_scale", "citation_sigma", "citation_alpha",  "coauthor_mean", "coauthor_dispersion",
      "categories",    "category_scale", "unpublished_frac", "uncited_frac", "unstable_frac",
      "internal_coauthor_rate"};
  if (!j.is_object()) throw ConfigError("config: expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!top_keys.contains(k)) throw ConfigError("config: unknown key '" + k + "'");
  }
  SynthConfig c;
  detail::read_opt(j, "seed", c.seed, "");
  if (auto it = j.find("window"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("window: expected an object");
    detail::read_opt(*it, "pub_year_from", c.window.pub_year_from, "window.");
    detail::read_opt(*it, "pub_year_to", c.window.pub_year_to, "window.");
    detail::read_opt(*it, "census_date", c.window.census_date, "window.");
  }
  detail::read_opt(j, "cross_field_copub_rate", c.cross_field_copub_rate, "");
  detail::read_opt(j, "multi_category_rate", c.multi_category_rate, "");
  detail::read_opt(j, "n_universities", c.n_universities, "");
  detail::read_opt(j, "intramural_rate", c.intramural_rate, "");
  std::string law = "lognormal";
  detail::read_opt(j, "citation_law", law, "");
  if (law == "lognormal") {
    c.citation_law = CitationLaw::lognormal;
  } else if (law == "power_law") {
    c.citation_law = CitationLaw::power_law;
  } else {
    throw ConfigError("citation_law: unknown law '" + law + "'");
  }
  if (auto it = j.find("fields"); it != j.end()) {
    if (!it->is_array()) throw ConfigError("fields: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& o = (*it)[i];
      const std::string at = "fields[" + std::to_string(i) + "].";
      if (!o.is_object()) throw ConfigError(at.substr(0, at.size() - 1) + ": expected an object");
      for (const auto& [k, v] : o.items()) {
        if (!field_keys.contains(k)) throw ConfigError(at + k + ": unknown key");
      }
      FieldProfile f;
      detail::read_opt(o, "sds", f.sds, at);
      detail::read_opt(o, "uda", f.uda, at);
      detail::read_opt(o, "n_researchers", f.n_researchers, at);
      detail::read_opt(o, "pub_rate", f.pub_rate, at);
      detail::read_opt(o, "productivity_sigma", f.productivity_sigma, at);
      detail::read_opt(o, "citation_scale", f.citation_scale, at);
      detail::read_opt(o, "citation_sigma", f.citation_sigma, at);
      detail::read_opt(o, "citation_alpha", f.citation_alpha, at);
      detail::read_opt(o, "coauthor_mean", f.coauthor_mean, at);
      detail::read_opt(o, "coauthor_dispersion", f.coauthor_dispersion, at);
      detail::read_opt(o, "categories", f.categories, at);
      detail::read_opt(o, "category_scale", f.category_scale, at);
      detail::read_opt(o, "unpublished_frac", f.unpublished_frac, at);
      detail::read_opt(o, "uncited_frac", f.uncited_frac, at);
      detail::read_opt(o, "unstable_frac", f.unstable_frac, at);
      detail::read_opt(o, "internal_coauthor_rate", f.internal_coauthor_rate, at);
      c.fields.push_back(std::move(f));
    }
  }
  validate(c);
  return c;
}

}  // namespace prodrank::synth
