/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_IO_HPP_
#define TRAJGP_IO_HPP_

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "trajgp/dataset.hpp"
#include "trajgp/design.hpp"
#include "trajgp/sampler.hpp"

namespace trajgp {

// ---------------------------------------------------------------------------
// Dataset CSV
//
// Header: id,timestamp,x,y,ax,ay,az,outcome,<covariates...>,inclinometer_off_seconds
// Columns are located by header name; optional fields may be empty. Ingestion
// applies the preprocessing rules of the source study: rows with more than
// five inclinometer-off seconds are dropped, rows outside the 7am-11pm local
// waking window are dropped, and when no outcome column is given the outcome
// is log |(ax,ay,az)| (zero-magnitude rows are dropped as inactive epochs).
// ---------------------------------------------------------------------------

TrajectoryDataset ingest(const std::string& path, const ModelSpec& spec);

// Writes the dataset in the same layout `ingest` reads. Raw axis counts and
// inclinometer fields are left empty (only the derived outcome is stored).
// Categorical codes are written back as level names when `spec` declares the
// column, otherwise as the bare integer code.
void write_dataset_csv(const std::string& path, const TrajectoryDataset& data,
                       const std::vector<CategoricalSpec>& categoricals = {});

// ---------------------------------------------------------------------------
// GPS fixes and position interpolation
// ---------------------------------------------------------------------------

struct GpsTrack {
  std::string id;
  std::vector<std::int64_t> stamp_ms;  // sorted ascending after read
  std::vector<double> lon;
  std::vector<double> lat;
};

// Header: id,timestamp,lon,lat. Fixes are grouped per individual and sorted.
std::vector<GpsTrack> read_gps_csv(const std::string& path);

// Assigns (x,y) = (lon,lat) at each observation by linear interpolation
// between the bracketing fixes, but only when those fixes are strictly less
// than 30 seconds apart; an observation exactly at a fix takes that fix's
// position. Rows without a qualifying bracket keep no position.
void join_gps(TrajectoryDataset& data, const std::vector<GpsTrack>& tracks);

// ---------------------------------------------------------------------------
// Train/test split
// ---------------------------------------------------------------------------

// Copy of the selected rows (indices ascending) of one individual's series.
IndividualSeries subset_rows(const IndividualSeries& s,
                             const std::vector<Eigen::Index>& idx);

// Row-level uniform split, stratified by individual: each individual keeps
// ceil(fraction * rows) rows in train, chosen by a per-individual shuffle
// seeded deterministically from `seed`. Individuals with fewer than two rows
// go entirely to train (a note is appended to `warnings` when given). Both
// halves keep every individual (possibly with zero rows) so indices align,
// and share the original time origin.
std::pair<TrajectoryDataset, TrajectoryDataset> split(
    const TrajectoryDataset& data, double fraction, std::uint64_t seed,
    std::vector<std::string>* warnings = nullptr);

// ---------------------------------------------------------------------------
// Chain file
// ---------------------------------------------------------------------------

// Streams sampler output to an append-only CSV with header
//   iteration,accepted,sigma2,phi,tau2,lambda,<coefficient names...>
// flushed every `flush_every` rows so a killed run loses at most that many.
class ChainFileWriter : public ChainSink {
 public:
  explicit ChainFileWriter(const std::string& path, long flush_every = 500);

  void begin(const std::vector<std::string>& psi_names) override;
  void row(long iteration, bool accepted, double sigma2, double phi,
           double tau2, double lambda, const Eigen::VectorXd& psi) override;
  void finish() override;

 private:
  std::ofstream out_;
  std::string path_;
  long flush_every_;
  long rows_since_flush_ = 0;
};

struct ChainData {
  std::vector<std::string> psi_names;
  PosteriorChain chain;
};

// Reads a chain file back. A truncated final row (e.g. after a kill) is
// silently discarded; every complete row is returned.
ChainData read_chain_csv(const std::string& path);

}  // namespace trajgp

#endif  // TRAJGP_IO_HPP_
