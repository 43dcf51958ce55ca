#pragma once

#include "rdlab/applications.hpp"
#include "rdlab/config.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace rdlab {

/// Ordered key=value rows embedded as '#' header lines in every output file.
/// Contains the fully resolved configuration (with provenance), tool version
/// and input digests; nothing time- or host-dependent, so re-running with the
/// same manifest reproduces output files byte for byte.
struct Manifest {
    std::vector<std::pair<std::string, std::string>> rows;

    void add(const std::string& key, const std::string& value);
    void add_double(const std::string& key, double value);
    static Manifest from_config(const Config& cfg);
    void write_header(std::FILE* f) const;
};

/// FNV-1a digest of a file's bytes, hex-encoded; used for input echoes.
std::string file_digest(const std::string& path);

/// Shared resolved state for one run: nonlinearity, grid, calibrated fate
/// certificates, ground state, eigenpair and derived parameter blocks.
struct Lab {
    Config cfg;
    Nonlinearity nl = Nonlinearity::cubic(0.3);
    GridPtr grid;
    SolverParams solver;
    FateParams fate;
    GroundState gs;
    EigenPair eig;
    ThresholdParams thr;
    LinearizedParams lin;

    static Lab make(const Config& cfg);

    /// View for the application pipelines (references this Lab; keep alive).
    AppContext app() const;

    /// Manifest echoing the resolved config plus calibration outputs.
    Manifest manifest() const;
};

/// Deterministic double formatting used in all CSV output (%.17g).
std::string fmt_double(double v);

} // namespace rdlab
