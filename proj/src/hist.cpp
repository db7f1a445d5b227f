#include "histrate/hist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "histrate/errors.hpp"

namespace histrate {

namespace {

void check_fit_inputs(const LabeledSample& data, const GridSpec& grid) {
  if (data.n() == 0) throw ConfigError("fit: empty sample");
  if (data.dim() != grid.d)
    throw ConfigError("fit: sample dimension " + std::to_string(data.dim()) +
                      " does not match grid dimension " +
                      std::to_string(grid.d));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

HistogramClassifier fit(const LabeledSample& data, const GridSpec& grid) {
  check_fit_inputs(data, grid);
  std::map<CellIndex, int> net;
  CellIndex scratch;
  scratch.coords.resize(grid.d);
  const Eigen::Index n = data.n();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < grid.d; ++j)
      scratch.coords[j] =
          static_cast<int>(std::floor(data.points(i, j) / grid.s));
    const auto it = net.find(scratch);
    if (it == net.end())
      net.emplace(scratch, data.labels[i]);
    else
      it->second += data.labels[i];
  }
  HistogramClassifier out;
  out.grid = grid;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (const auto& [idx, count] : net)
    out.votes.emplace(idx, static_cast<double>(count) * inv_n);
  return out;
}

HistogramClassifier infinite_sample_fit(const SyntheticFamily& family,
                                        const GridSpec& grid,
                                        double quad_tol) {
  if (family.d != grid.d)
    throw ConfigError("infinite_sample_fit: family and grid dimensions differ");
  HistogramClassifier out;
  out.grid = grid;
  for (const CellIndex& idx : cells_meeting_x(grid)) {
    const CellBox box = cell_bounds(idx, grid);
    out.votes.emplace(idx, box_signed_noise_mass(family, box, quad_tol));
  }
  return out;
}

bool erm_verify(const HistogramClassifier& classifier,
                const LabeledSample& data,
                const std::optional<CellSet>& region) {
  check_fit_inputs(data, classifier.grid);
  const bool restricted = region.has_value();

  // Occupied cells and, for the region-active ones, their label-count pair.
  std::map<CellIndex, std::pair<long, long>> occupied;  // (#+1, #-1)
  long classifier_errors = 0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const CellIndex idx = cell_of(data.points.row(i), classifier.grid);
    auto& counts = occupied[idx];
    const bool active = !restricted || region->count(idx) > 0;
    if (active) {
      if (data.labels[i] > 0)
        ++counts.first;
      else
        ++counts.second;
      if (classifier.label_of(idx) != data.labels[i]) ++classifier_errors;
    }
  }
  if (occupied.size() > 20)
    throw ConfigError("erm_verify: " + std::to_string(occupied.size()) +
                      " occupied cells exceed the exhaustive bound of 20");

  std::vector<std::pair<long, long>> cells;
  cells.reserve(occupied.size());
  for (const auto& [idx, counts] : occupied) cells.push_back(counts);
  const int k = static_cast<int>(cells.size());

  // Exhaustive sweep of all 2^k labelings in Gray-code order; bit j set
  // means cell j is labeled +1.  Start from the all -1 labeling.
  long current = 0;
  for (const auto& [plus, minus] : cells) current += plus;
  long best = current;
  const std::uint64_t total = 1ULL << k;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int j = std::countr_zero(i);
    const std::uint64_t gray = i ^ (i >> 1);
    if (gray & (1ULL << j))
      current += cells[j].second - cells[j].first;  // flip to +1
    else
      current += cells[j].first - cells[j].second;  // flip back to -1
    best = std::min(best, current);
  }
  return classifier_errors == best;
}

SGrid make_s_grid(std::size_t n, int d) {
  if (n < 4)
    throw ConfigError("make_s_grid: the training-validation split needs n >= 4");
  if (d < 1) throw ConfigError("make_s_grid: dimension must be >= 1");
  const double step = std::pow(static_cast<double>(n),
                               -1.0 / static_cast<double>(d));
  const auto count = static_cast<std::size_t>(
      std::floor(1.0 / step + 1e-9));
  SGrid out;
  out.values.reserve(count);
  for (std::size_t k = 1; k <= count; ++k)
    out.values.push_back(std::min(static_cast<double>(k) * step, 1.0));
  return out;
}

TvhrFit tvhr_fit(const LabeledSample& data, const SGrid& s_grid) {
  const Eigen::Index n = data.n();
  if (n < 4) throw ConfigError("tvhr_fit: needs at least 4 observations");
  if (s_grid.values.empty()) throw ConfigError("tvhr_fit: empty width grid");
  const int d = data.dim();
  const Eigen::Index k = n / 2 + 1;
  const Eigen::Index m = n - k;

  std::vector<std::int32_t> counts;
  std::vector<std::size_t> stride(static_cast<std::size_t>(d));
  TvhrFit out;
  out.table.reserve(s_grid.values.size());
  long best_errors = -1;

  for (double s : s_grid.values) {
    const GridSpec grid = make_grid(d, s);
    const auto [k_lo, k_hi] = axis_cell_range(grid);
    const std::size_t per_axis = static_cast<std::size_t>(k_hi - k_lo + 1);
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) {
      if (total > kDefaultCellCap / per_axis)
        throw ConfigError("tvhr_fit: cell enumeration exceeds cap");
      total *= per_axis;
      stride[static_cast<std::size_t>(j)] = 1;
    }
    for (int j = d - 2; j >= 0; --j)
      stride[static_cast<std::size_t>(j)] =
          stride[static_cast<std::size_t>(j) + 1] * per_axis;
    counts.assign(total, 0);

    const double inv_s = 1.0 / s;
    const double* x = data.points.data();
    const int* y = data.labels.data();
    auto flat_index = [&](Eigen::Index i) {
      std::size_t idx = 0;
      for (int j = 0; j < d; ++j) {
        const long cell = static_cast<long>(
            std::floor(x[static_cast<Eigen::Index>(j) * n + i] * inv_s));
        idx += static_cast<std::size_t>(cell - k_lo) *
               stride[static_cast<std::size_t>(j)];
      }
      return idx;
    };
    for (Eigen::Index i = 0; i < k; ++i)
      counts[flat_index(i)] += static_cast<std::int32_t>(y[i]);
    long errors = 0;
    for (Eigen::Index i = k; i < n; ++i) {
      const int pred = counts[flat_index(i)] >= 0 ? +1 : -1;
      errors += pred != y[i];
    }
    out.table.emplace_back(s, static_cast<double>(errors) /
                                  static_cast<double>(m));
    if (best_errors < 0 || errors < best_errors) {
      best_errors = errors;
      out.chosen_s = s;
    }
  }

  LabeledSample train;
  train.points = data.points.topRows(k);
  train.labels = data.labels.head(k);
  out.classifier = fit(train, make_grid(d, out.chosen_s));
  return out;
}

std::string serialize_classifier(const HistogramClassifier& classifier) {
  std::string out;
  out += "s " + format_double(classifier.grid.s) + "\n";
  out += "d " + std::to_string(classifier.grid.d) + "\n";
  out += "default_label " + std::to_string(classifier.default_label) + "\n";
  for (const auto& [idx, vote] : classifier.votes) {
    for (Eigen::Index i = 0; i < idx.coords.size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(idx.coords[i]);
    }
    out += ':';
    out += format_double(vote);
    out += '\n';
  }
  return out;
}

HistogramClassifier parse_classifier(std::istream& in) {
  std::string key;
  double s = 0.0;
  int d = 0;
  int default_label = 0;
  for (int i = 0; i < 3; ++i) {
    if (!(in >> key)) throw ConfigError("classifier file: truncated header");
    if (key == "s") {
      if (!(in >> s)) throw ConfigError("classifier file: bad side length");
    } else if (key == "d") {
      if (!(in >> d)) throw ConfigError("classifier file: bad dimension");
    } else if (key == "default_label") {
      if (!(in >> default_label) ||
          (default_label != 1 && default_label != -1))
        throw ConfigError("classifier file: bad default label");
    } else {
      throw ConfigError("classifier file: unknown header key '" + key + "'");
    }
  }
  HistogramClassifier out;
  out.grid = make_grid(d, s);
  out.default_label = default_label;
  std::string line;
  std::getline(in, line);  // consume end of header line
  std::size_t row = 3;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ConfigError("classifier file: missing ':' at line " +
                        std::to_string(row));
    CellIndex idx;
    idx.coords.resize(d);
    std::stringstream cells(line.substr(0, colon));
    std::string field;
    for (int i = 0; i < d; ++i) {
      if (!std::getline(cells, field, ','))
        throw ConfigError("classifier file: bad cell index at line " +
                          std::to_string(row));
      idx.coords[i] = std::stoi(field);
    }
    if (std::getline(cells, field, ','))
      throw ConfigError("classifier file: cell index at line " +
                        std::to_string(row) + " does not match dimension");
    out.votes[idx] = std::stod(line.substr(colon + 1));
  }
  return out;
}

void save_classifier(const HistogramClassifier& classifier,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open model file for writing: " + path);
  out << serialize_classifier(classifier);
  if (!out) throw ComputeError("failed writing model file: " + path);
}

HistogramClassifier load_classifier(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file: " + path);
  return parse_classifier(in);
}

}  // namespace histrate
