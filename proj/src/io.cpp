/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "trajgp/errors.hpp"
#include "trajgp/rng.hpp"
#include "trajgp/timeparse.hpp"

namespace trajgp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
    fields.back().pop_back();
  }
  return fields;
}

double parse_double_field(const std::string& s, long line_no, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw data_error("line " + std::to_string(line_no) + ": malformed " + what +
                     " value '" + s + "'");
  }
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

struct RawRow {
  std::int64_t stamp_ms = 0;
  double hour = 0.0;
  double outcome = 0.0;
  double x = kNaN, y = kNaN;
  std::vector<double> num;
  std::vector<int> cat;
};

}  // namespace

TrajectoryDataset ingest(const std::string& path, const ModelSpec& spec) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty dataset file: " + path);

  const auto header = split_line(line);
  const int c_id = find_column(header, "id");
  const int c_ts = find_column(header, "timestamp");
  if (c_id < 0 || c_ts < 0) {
    throw data_error("dataset header must contain 'id' and 'timestamp' columns");
  }
  const int c_x = find_column(header, "x");
  const int c_y = find_column(header, "y");
  const int c_ax = find_column(header, "ax");
  const int c_ay = find_column(header, "ay");
  const int c_az = find_column(header, "az");
  const int c_out = find_column(header, "outcome");
  const int c_incl = find_column(header, "inclinometer_off_seconds");

  std::vector<int> c_num, c_cat;
  for (const auto& name : spec.numeric_covariates) {
    const int c = find_column(header, name);
    if (c < 0) throw data_error("dataset missing declared covariate column: " + name);
    c_num.push_back(c);
  }
  for (const auto& cs : spec.categoricals) {
    const int c = find_column(header, cs.name);
    if (c < 0) throw data_error("dataset missing declared covariate column: " + cs.name);
    c_cat.push_back(c);
  }

  std::vector<std::string> order;                 // ids in first-appearance order
  std::map<std::string, std::vector<RawRow>> rows;
  bool have_offset = false;
  int utc_offset_min = 0;

  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_line(line);
    if (f.size() != header.size()) {
      throw data_error("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(f.size()));
    }
    if (f[c_id].empty()) {
      throw data_error("line " + std::to_string(line_no) + ": empty id");
    }

    ParsedStamp stamp;
    try {
      stamp = parse_iso8601(f[c_ts]);
    } catch (const data_error& e) {
      throw data_error("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!have_offset) {
      utc_offset_min = stamp.offset_min;
      have_offset = true;
    }

    if (c_incl >= 0 && !f[c_incl].empty() &&
        parse_double_field(f[c_incl], line_no, "inclinometer_off_seconds") > 5.0) {
      continue;  // sensor not worn reliably during this epoch
    }

    RawRow row;
    row.stamp_ms = stamp.epoch_ms;
    row.hour = local_hour(stamp.epoch_ms, stamp.offset_min);
    if (row.hour < 7.0 || row.hour > 23.0) continue;  // outside waking window

    if (c_out >= 0 && !f[c_out].empty()) {
      row.outcome = parse_double_field(f[c_out], line_no, "outcome");
    } else if (c_ax >= 0 && c_ay >= 0 && c_az >= 0 && !f[c_ax].empty() &&
               !f[c_ay].empty() && !f[c_az].empty()) {
      const double m = mag(parse_double_field(f[c_ax], line_no, "ax"),
                           parse_double_field(f[c_ay], line_no, "ay"),
                           parse_double_field(f[c_az], line_no, "az"));
      if (m == 0.0) continue;  // inactive epoch, log-magnitude undefined
      row.outcome = std::log(m);
    } else {
      throw data_error("line " + std::to_string(line_no) +
                       ": no outcome value and no complete (ax,ay,az) triple");
    }

    if (c_x >= 0 && c_y >= 0 && !f[c_x].empty() && !f[c_y].empty()) {
      row.x = parse_double_field(f[c_x], line_no, "x");
      row.y = parse_double_field(f[c_y], line_no, "y");
    }

    row.num.reserve(c_num.size());
    for (std::size_t j = 0; j < c_num.size(); ++j) {
      if (f[c_num[j]].empty()) {
        throw data_error("line " + std::to_string(line_no) +
                         ": empty value for covariate '" +
                         spec.numeric_covariates[j] + "'");
      }
      row.num.push_back(parse_double_field(f[c_num[j]], line_no,
                                           spec.numeric_covariates[j].c_str()));
    }
    row.cat.reserve(c_cat.size());
    for (std::size_t j = 0; j < c_cat.size(); ++j) {
      const auto& cs = spec.categoricals[j];
      const std::string& level = f[c_cat[j]];
      const auto it = std::find(cs.levels.begin(), cs.levels.end(), level);
      if (it == cs.levels.end()) {
        throw data_error("line " + std::to_string(line_no) + ": unknown level '" +
                         level + "' for covariate '" + cs.name + "'");
      }
      row.cat.push_back(static_cast<int>(it - cs.levels.begin()));
    }

    auto found = rows.find(f[c_id]);
    if (found == rows.end()) {
      order.push_back(f[c_id]);
      found = rows.emplace(f[c_id], std::vector<RawRow>()).first;
    }
    found->second.push_back(std::move(row));
  }

  if (order.empty()) throw data_error("dataset has no usable rows: " + path);

  std::int64_t origin = std::numeric_limits<std::int64_t>::max();
  for (auto& [id, rs] : rows) {
    std::stable_sort(rs.begin(), rs.end(), [](const RawRow& a, const RawRow& b) {
      return a.stamp_ms < b.stamp_ms;
    });
    for (std::size_t i = 1; i < rs.size(); ++i) {
      if (rs[i].stamp_ms == rs[i - 1].stamp_ms) {
        throw data_error("duplicate timestamp " +
                         format_iso8601(rs[i].stamp_ms, utc_offset_min) +
                         " for individual '" + id + "'");
      }
    }
    origin = std::min(origin, rs.front().stamp_ms);
  }

  TrajectoryDataset data;
  data.numeric_names = spec.numeric_covariates;
  for (const auto& cs : spec.categoricals) data.categorical_names.push_back(cs.name);
  data.origin_ms = origin;
  data.utc_offset_min = utc_offset_min;
  for (const auto& id : order) {
    const auto& rs = rows[id];
    const Eigen::Index n = static_cast<Eigen::Index>(rs.size());
    IndividualSeries s;
    s.id = id;
    s.time.resize(n);
    s.stamp_ms.resize(rs.size());
    s.hour.resize(n);
    s.outcome.resize(n);
    s.position = Eigen::MatrixXd::Constant(n, 2, kNaN);
    s.numeric_cov.resize(n, static_cast<Eigen::Index>(c_num.size()));
    s.categorical.resize(n, static_cast<Eigen::Index>(c_cat.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
      const RawRow& r = rs[i];
      s.time[i] = static_cast<double>(r.stamp_ms - origin) / 1000.0;
      s.stamp_ms[i] = r.stamp_ms;
      s.hour[i] = r.hour;
      s.outcome[i] = r.outcome;
      s.position(i, 0) = r.x;
      s.position(i, 1) = r.y;
      for (std::size_t j = 0; j < r.num.size(); ++j) {
        s.numeric_cov(i, static_cast<Eigen::Index>(j)) = r.num[j];
      }
      for (std::size_t j = 0; j < r.cat.size(); ++j) {
        s.categorical(i, static_cast<Eigen::Index>(j)) = r.cat[j];
      }
    }
    data.individuals.push_back(std::move(s));
  }
  return data;
}

void write_dataset_csv(const std::string& path, const TrajectoryDataset& data,
                       const std::vector<CategoricalSpec>& categoricals) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open dataset file for writing: " + path);

  out << "id,timestamp,x,y,ax,ay,az,outcome";
  for (const auto& name : data.numeric_names) out << ',' << name;
  for (const auto& name : data.categorical_names) out << ',' << name;
  out << ",inclinometer_off_seconds\n";

  std::vector<const CategoricalSpec*> cat_specs;
  for (const auto& name : data.categorical_names) {
    const CategoricalSpec* found = nullptr;
    for (const auto& cs : categoricals) {
      if (cs.name == name) found = &cs;
    }
    cat_specs.push_back(found);
  }

  for (const auto& s : data.individuals) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      out << s.id << ',' << format_iso8601(s.stamp_ms[i], data.utc_offset_min)
          << ',';
      if (s.has_position(i)) {
        out << fmt(s.position(i, 0)) << ',' << fmt(s.position(i, 1));
      } else {
        out << ',';
      }
      out << ",,,," << fmt(s.outcome[i]);
      for (Eigen::Index j = 0; j < s.numeric_cov.cols(); ++j) {
        out << ',' << fmt(s.numeric_cov(i, j));
      }
      for (Eigen::Index j = 0; j < s.categorical.cols(); ++j) {
        const int code = s.categorical(i, j);
        const CategoricalSpec* cs = cat_specs[static_cast<std::size_t>(j)];
        if (cs && code >= 0 && code < static_cast<int>(cs->levels.size())) {
          out << ',' << cs->levels[static_cast<std::size_t>(code)];
        } else {
          out << ',' << code;
        }
      }
      out << ",\n";
    }
  }
  if (!out) throw data_error("failed writing dataset file: " + path);
}

std::vector<GpsTrack> read_gps_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open GPS file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty GPS file: " + path);
  const auto header = split_line(line);
  const int c_id = find_column(header, "id");
  const int c_ts = find_column(header, "timestamp");
  const int c_lon = find_column(header, "lon");
  const int c_lat = find_column(header, "lat");
  if (c_id < 0 || c_ts < 0 || c_lon < 0 || c_lat < 0) {
    throw data_error("GPS header must contain id, timestamp, lon, lat columns");
  }

  std::vector<GpsTrack> tracks;
  std::map<std::string, std::size_t> index;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_line(line);
    if (f.size() != header.size()) {
      throw data_error("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(f.size()));
    }
    ParsedStamp stamp;
    try {
      stamp = parse_iso8601(f[c_ts]);
    } catch (const data_error& e) {
      throw data_error("line " + std::to_string(line_no) + ": " + e.what());
    }
    auto it = index.find(f[c_id]);
    if (it == index.end()) {
      it = index.emplace(f[c_id], tracks.size()).first;
      tracks.push_back(GpsTrack{f[c_id], {}, {}, {}});
    }
    GpsTrack& t = tracks[it->second];
    t.stamp_ms.push_back(stamp.epoch_ms);
    t.lon.push_back(parse_double_field(f[c_lon], line_no, "lon"));
    t.lat.push_back(parse_double_field(f[c_lat], line_no, "lat"));
  }

  for (auto& t : tracks) {
    std::vector<std::size_t> idx(t.stamp_ms.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return t.stamp_ms[a] < t.stamp_ms[b];
    });
    GpsTrack sorted{t.id, {}, {}, {}};
    sorted.stamp_ms.reserve(idx.size());
    for (const std::size_t i : idx) {
      sorted.stamp_ms.push_back(t.stamp_ms[i]);
      sorted.lon.push_back(t.lon[i]);
      sorted.lat.push_back(t.lat[i]);
    }
    t = std::move(sorted);
  }
  return tracks;
}

void join_gps(TrajectoryDataset& data, const std::vector<GpsTrack>& tracks) {
  constexpr std::int64_t kMaxBracketMs = 30'000;
  std::map<std::string, const GpsTrack*> by_id;
  for (const auto& t : tracks) by_id[t.id] = &t;

  for (auto& s : data.individuals) {
    const auto it = by_id.find(s.id);
    if (it == by_id.end()) continue;
    const GpsTrack& t = *it->second;
    if (t.stamp_ms.empty()) continue;
    if (s.position.rows() != s.rows()) {
      s.position = Eigen::MatrixXd::Constant(s.rows(), 2, kNaN);
    }
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      const std::int64_t ts = s.stamp_ms[static_cast<std::size_t>(i)];
      const auto lo =
          std::lower_bound(t.stamp_ms.begin(), t.stamp_ms.end(), ts);
      if (lo != t.stamp_ms.end() && *lo == ts) {
        const auto j = static_cast<std::size_t>(lo - t.stamp_ms.begin());
        s.position(i, 0) = t.lon[j];
        s.position(i, 1) = t.lat[j];
        continue;
      }
      if (lo == t.stamp_ms.begin() || lo == t.stamp_ms.end()) continue;
      const auto nxt = static_cast<std::size_t>(lo - t.stamp_ms.begin());
      const auto prv = nxt - 1;
      const std::int64_t gap = t.stamp_ms[nxt] - t.stamp_ms[prv];
      if (gap >= kMaxBracketMs) continue;  // fixes too far apart to trust
      const double w = static_cast<double>(ts - t.stamp_ms[prv]) /
                       static_cast<double>(gap);
      s.position(i, 0) = t.lon[prv] + w * (t.lon[nxt] - t.lon[prv]);
      s.position(i, 1) = t.lat[prv] + w * (t.lat[nxt] - t.lat[prv]);
    }
  }
}

IndividualSeries subset_rows(const IndividualSeries& s,
                             const std::vector<Eigen::Index>& idx) {
  IndividualSeries out;
  out.id = s.id;
  const Eigen::Index n = static_cast<Eigen::Index>(idx.size());
  out.time.resize(n);
  out.stamp_ms.resize(idx.size());
  out.hour.resize(n);
  out.outcome.resize(n);
  out.position.resize(n, 2);
  out.numeric_cov.resize(n, s.numeric_cov.cols());
  out.categorical.resize(n, s.categorical.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = idx[static_cast<std::size_t>(i)];
    out.time[i] = s.time[r];
    out.stamp_ms[static_cast<std::size_t>(i)] =
        s.stamp_ms[static_cast<std::size_t>(r)];
    out.hour[i] = s.hour[r];
    out.outcome[i] = s.outcome[r];
    if (s.position.rows() > r) {
      out.position.row(i) = s.position.row(r);
    } else {
      out.position.row(i).setConstant(kNaN);
    }
    if (s.numeric_cov.cols() > 0) out.numeric_cov.row(i) = s.numeric_cov.row(r);
    if (s.categorical.cols() > 0) out.categorical.row(i) = s.categorical.row(r);
  }
  return out;
}

std::pair<TrajectoryDataset, TrajectoryDataset> split(
    const TrajectoryDataset& data, double fraction, std::uint64_t seed,
    std::vector<std::string>* warnings) {
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw config_error("split fraction must lie in (0,1)");
  }
  TrajectoryDataset train, test;
  train.numeric_names = test.numeric_names = data.numeric_names;
  train.categorical_names = test.categorical_names = data.categorical_names;
  train.origin_ms = test.origin_ms = data.origin_ms;
  train.utc_offset_min = test.utc_offset_min = data.utc_offset_min;

  for (std::size_t k = 0; k < data.individuals.size(); ++k) {
    const IndividualSeries& s = data.individuals[k];
    const Eigen::Index n = s.rows();
    std::vector<Eigen::Index> tr, te;
    if (n < 2) {
      for (Eigen::Index i = 0; i < n; ++i) tr.push_back(i);
      if (warnings) {
        warnings->push_back("individual '" + s.id +
                            "' has fewer than 2 rows; all assigned to train");
      }
    } else {
      const auto n_train = std::min<Eigen::Index>(
          n, static_cast<Eigen::Index>(
                 std::ceil(fraction * static_cast<double>(n))));
      std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
      std::iota(idx.begin(), idx.end(), 0);
      auto rng = make_rng(seed, static_cast<std::uint64_t>(k));
      std::shuffle(idx.begin(), idx.end(), rng);
      tr.assign(idx.begin(), idx.begin() + n_train);
      te.assign(idx.begin() + n_train, idx.end());
      std::sort(tr.begin(), tr.end());
      std::sort(te.begin(), te.end());
    }
    train.individuals.push_back(subset_rows(s, tr));
    test.individuals.push_back(subset_rows(s, te));
  }
  return {train, test};
}

ChainFileWriter::ChainFileWriter(const std::string& path, long flush_every)
    : out_(path, std::ios::trunc), path_(path), flush_every_(flush_every) {
  if (!out_) throw data_error("cannot open chain file for writing: " + path);
  if (flush_every_ < 1) flush_every_ = 1;
}

void ChainFileWriter::begin(const std::vector<std::string>& psi_names) {
  out_ << "iteration,accepted,sigma2,phi,tau2,lambda";
  for (const auto& name : psi_names) out_ << ',' << name;
  out_ << '\n';
}

void ChainFileWriter::row(long iteration, bool accepted, double sigma2,
                          double phi, double tau2, double lambda,
                          const Eigen::VectorXd& psi) {
  out_ << iteration << ',' << (accepted ? 1 : 0) << ',' << fmt(sigma2) << ','
       << fmt(phi) << ',' << fmt(tau2) << ',' << fmt(lambda);
  for (Eigen::Index j = 0; j < psi.size(); ++j) out_ << ',' << fmt(psi[j]);
  out_ << '\n';
  if (++rows_since_flush_ >= flush_every_) {
    out_.flush();
    rows_since_flush_ = 0;
  }
}

void ChainFileWriter::finish() {
  out_.flush();
  if (!out_) throw data_error("failed writing chain file: " + path_);
}

ChainData read_chain_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open chain file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty chain file: " + path);
  const auto header = split_line(line);
  const char* expected[] = {"iteration", "accepted", "sigma2",
                            "phi",       "tau2",     "lambda"};
  if (header.size() < 6) throw data_error("chain file header too short: " + path);
  for (int j = 0; j < 6; ++j) {
    if (header[static_cast<std::size_t>(j)] != expected[j]) {
      throw data_error("chain file header mismatch at column " +
                       std::to_string(j + 1) + ": " + path);
    }
  }

  ChainData out;
  out.psi_names.assign(header.begin() + 6, header.end());
  const std::size_t p = out.psi_names.size();

  std::vector<std::array<double, 4>> theta;
  std::vector<double> psi_flat;
  std::vector<std::uint8_t> accepted;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != header.size()) break;  // truncated tail; keep complete rows
    std::array<double, 4> th;
    std::vector<double> psi_row(p);
    bool ok = true;
    char* end = nullptr;
    const long acc = std::strtol(f[1].c_str(), &end, 10);
    if (end == f[1].c_str() || *end != '\0') ok = false;
    for (int j = 0; j < 4 && ok; ++j) {
      const std::string& s = f[static_cast<std::size_t>(2 + j)];
      th[static_cast<std::size_t>(j)] = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') ok = false;
    }
    for (std::size_t j = 0; j < p && ok; ++j) {
      const std::string& s = f[6 + j];
      psi_row[j] = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') ok = false;
    }
    if (!ok) break;  // malformed (likely truncated mid-value)
    accepted.push_back(acc != 0 ? 1 : 0);
    theta.push_back(th);
    psi_flat.insert(psi_flat.end(), psi_row.begin(), psi_row.end());
  }

  const long n = static_cast<long>(theta.size());
  PosteriorChain& ch = out.chain;
  ch.psi.resize(n, static_cast<Eigen::Index>(p));
  ch.sigma2.resize(n);
  ch.phi.resize(n);
  ch.tau2.resize(n);
  ch.lambda.resize(n);
  ch.accepted = std::move(accepted);
  for (long i = 0; i < n; ++i) {
    ch.sigma2[i] = theta[static_cast<std::size_t>(i)][0];
    ch.phi[i] = theta[static_cast<std::size_t>(i)][1];
    ch.tau2[i] = theta[static_cast<std::size_t>(i)][2];
    ch.lambda[i] = theta[static_cast<std::size_t>(i)][3];
    for (std::size_t j = 0; j < p; ++j) {
      ch.psi(i, static_cast<Eigen::Index>(j)) =
          psi_flat[static_cast<std::size_t>(i) * p + j];
    }
  }
  return out;
}

}  // namespace trajgp
