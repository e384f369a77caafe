#include "ispar/features/feature_matrix.hpp"

#include <cmath>
#include <optional>

#include "ispar/common/error.hpp"
#include "ispar/common/parallel.hpp"
#include "ispar/features/dwt.hpp"

namespace ispar::features {

namespace {

std::vector<EnergyTerm> combinedEnergies(const FeatureSpec& spec) {
  if (!spec.energies.empty()) return spec.energies;
  std::vector<EnergyTerm> out;
  for (int p = 0; p < 3; ++p) {
    for (int l = 1; l <= 3; ++l) out.push_back({p, spec.coeffs.wavelet, l});
  }
  return out;
}

std::vector<EnergyTerm> poolTerms(const FeatureSpec& spec, std::size_t n, const WaveletCatalog& catalog) {
  std::vector<EnergyTerm> out;
  for (int p = 0; p < 3; ++p) {
    for (const auto& w : spec.poolWavelets) {
      const int maxLevel = maxUsefulLevel(n, catalog.at(w).length());
      for (int l = 1; l <= maxLevel; ++l) out.push_back({p, w, l});
    }
  }
  return out;
}

// Energies for a list of terms, decomposing each (phase, wavelet) once at the
// deepest level any term needs.
std::vector<double> energiesFor(const detect::CaptureWindow& w, const std::vector<EnergyTerm>& terms,
                                const WaveletCatalog& catalog) {
  std::vector<double> out(terms.size());
  std::vector<bool> done(terms.size(), false);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (done[i]) continue;
    const auto& t = terms[i];
    int depth = t.level;
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (terms[j].phase == t.phase && terms[j].wavelet == t.wavelet) depth = std::max(depth, terms[j].level);
    }
    const auto energy = waveletEnergy(
        dwtMultilevel(w.samples[static_cast<std::size_t>(t.phase)], catalog.at(t.wavelet), depth).details);
    for (std::size_t j = i; j < terms.size(); ++j) {
      if (terms[j].phase == t.phase && terms[j].wavelet == t.wavelet) {
        out[j] = energy[static_cast<std::size_t>(terms[j].level - 1)];
        done[j] = true;
      }
    }
  }
  return out;
}

}  // namespace

std::string phaseName(int phase) {
  static const char* names[] = {"phaseA", "phaseB", "phaseC"};
  if (phase < 0 || phase > 2) throw InvalidInput("phase index must be 0, 1 or 2");
  return names[phase];
}

std::string EnergyTerm::name() const { return phaseName(phase) + "." + wavelet + ".E" + std::to_string(level); }

EnergyTerm EnergyTerm::parse(const std::string& name) {
  const auto first = name.find('.');
  const auto last = name.rfind(".E");
  if (first == std::string::npos || last == std::string::npos || last <= first) {
    throw InvalidInput("bad energy feature name '" + name + "'");
  }
  EnergyTerm t;
  const auto phase = name.substr(0, first);
  if (phase == "phaseA") t.phase = 0;
  else if (phase == "phaseB") t.phase = 1;
  else if (phase == "phaseC") t.phase = 2;
  else throw InvalidInput("bad energy feature name '" + name + "'");
  t.wavelet = name.substr(first + 1, last - first - 1);
  try {
    t.level = std::stoi(name.substr(last + 2));
  } catch (const std::exception&) {
    throw InvalidInput("bad energy feature name '" + name + "'");
  }
  if (t.level < 1) throw InvalidInput("bad energy feature name '" + name + "'");
  return t;
}

std::string toString(FeatureMode m) {
  switch (m) {
    case FeatureMode::Coeffs: return "coeffs";
    case FeatureMode::Time: return "time";
    case FeatureMode::Combined: return "combined";
    case FeatureMode::EnergyPool: return "energy-pool";
  }
  return "?";
}

FeatureMode parseFeatureMode(const std::string& s) {
  if (s == "coeffs") return FeatureMode::Coeffs;
  if (s == "time") return FeatureMode::Time;
  if (s == "combined") return FeatureMode::Combined;
  if (s == "energy-pool") return FeatureMode::EnergyPool;
  throw InvalidInput("unknown feature mode '" + s + "'");
}

std::vector<std::string> featureSchema(const FeatureSpec& spec, std::size_t n, const WaveletCatalog& catalog) {
  std::vector<std::string> out;
  switch (spec.mode) {
    case FeatureMode::Coeffs: {
      const auto& f = catalog.at(spec.coeffs.wavelet);
      const int maxLevel = maxUsefulLevel(n, f.length());
      if (spec.coeffs.level < 1 || spec.coeffs.level > maxLevel) {
        throw InvalidInput("coeffs: level outside [1, " + std::to_string(maxLevel) + "] for " + f.name);
      }
      const auto lens = detailLengths(n, spec.coeffs.level);
      for (int p = 0; p < 3; ++p) {
        for (std::size_t l = 0; l < lens.size(); ++l) {
          for (std::size_t k = 0; k < lens[l]; ++k) {
            out.push_back(phaseName(p) + ".d" + std::to_string(l + 1) + ".coeff[" + std::to_string(k) + "]");
          }
        }
      }
      break;
    }
    case FeatureMode::Time:
    case FeatureMode::Combined: {
      const auto names = timeFeatureNames(spec.families, spec.time, spec.extended);
      for (int p = 0; p < 3; ++p) {
        for (const auto& nm : names) out.push_back(phaseName(p) + "." + nm);
      }
      if (spec.mode == FeatureMode::Combined) {
        for (const auto& t : combinedEnergies(spec)) {
          const int maxLevel = maxUsefulLevel(n, catalog.at(t.wavelet).length());
          if (t.level > maxLevel) throw InvalidInput("energy term " + t.name() + " is deeper than the useful level");
          out.push_back(t.name());
        }
      }
      break;
    }
    case FeatureMode::EnergyPool:
      for (const auto& t : poolTerms(spec, n, catalog)) out.push_back(t.name());
      break;
  }
  return out;
}

std::vector<double> extractFeatures(const detect::CaptureWindow& w, const FeatureSpec& spec,
                                    const WaveletCatalog& catalog) {
  const std::size_t n = w.samples[0].size();
  if (w.samples[1].size() != n || w.samples[2].size() != n) throw InvalidInput("capture phases differ in length");
  std::vector<double> out;
  switch (spec.mode) {
    case FeatureMode::Coeffs: {
      const auto& f = catalog.at(spec.coeffs.wavelet);
      for (int p = 0; p < 3; ++p) {
        const auto dec = dwtMultilevel(w.samples[static_cast<std::size_t>(p)], f, spec.coeffs.level);
        for (const auto& d : dec.details) out.insert(out.end(), d.begin(), d.end());
      }
      break;
    }
    case FeatureMode::Time:
    case FeatureMode::Combined: {
      for (int p = 0; p < 3; ++p) {
        const auto v = timeFeatures(w.samples[static_cast<std::size_t>(p)], spec.families, spec.time, spec.extended);
        out.insert(out.end(), v.begin(), v.end());
      }
      if (spec.mode == FeatureMode::Combined) {
        const auto e = energiesFor(w, combinedEnergies(spec), catalog);
        out.insert(out.end(), e.begin(), e.end());
      }
      break;
    }
    case FeatureMode::EnergyPool:
      out = energiesFor(w, poolTerms(spec, n, catalog), catalog);
      break;
  }
  return out;
}

FeatureMatrix extractFeatureMatrix(const std::vector<detect::CaptureWindow>& windows,
                                   const FeatureSpec& spec, int jobs, const WaveletCatalog& catalog) {
  FeatureMatrix fm;
  if (windows.empty()) return fm;
  const std::size_t n = windows.front().samples[0].size();
  for (const auto& w : windows) {
    if (w.samples[0].size() != n) throw InvalidInput("feature extraction needs uniform window length");
  }
  fm.schema = featureSchema(spec, n, catalog);
  std::vector<std::optional<std::vector<double>>> rows(windows.size());
  parallelFor(windows.size(), jobs, [&](std::size_t i) { rows[i] = extractFeatures(windows[i], spec, catalog); });

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = *rows[i];
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (!std::isfinite(r[j])) {
        fm.diagnostics.push_back("window " + std::to_string(i) + " dropped: non-finite " + fm.schema[j]);
        rows[i].reset();
        break;
      }
    }
    if (rows[i]) fm.kept.push_back(i);
  }
  fm.values.resize(static_cast<Eigen::Index>(fm.kept.size()), static_cast<Eigen::Index>(fm.schema.size()));
  for (std::size_t r = 0; r < fm.kept.size(); ++r) {
    const auto& row = *rows[fm.kept[r]];
    for (std::size_t c = 0; c < row.size(); ++c) {
      fm.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  return fm;
}

}  // namespace ispar::features
