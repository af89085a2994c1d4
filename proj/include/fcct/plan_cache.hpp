#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fcct/transform.hpp"

namespace fcct {

// On-disk plan cache, one binary file per (n, params).
//
// File layout (all integers little endian):
//   magic   8 bytes  "FCCPLAN1"
//   version u32      1
//   kind    u8       0 = direct, 1 = radix2
//   n       u64
//   r, s, t          u32 length + ASCII of the canonical param encoding
//   direct:  u64 dim, then dim*dim complex entries (f64 re, f64 im), row major
//   radix2:  64 kernel entries (f64 re, f64 im),
//            n^3 permutation values (u64),
//            u64 nnz, then nnz triplets (u64 row, u64 col, f64 re, f64 im)
//            sorted by (row, col)
//
// Children of a radix2 plan are separate cache entries, resolved recursively
// on load. A file that fails any header or size check is rebuilt in place
// with a warning on stderr; its content is never trusted.
class PlanStore {
public:
    explicit PlanStore(std::filesystem::path dir);

    std::shared_ptr<const TransformPlan> load_or_build(int n, const SkewParams& p);

    struct Stats {
        int hits = 0;    // plans loaded from a valid cache file
        int misses = 0;  // plans built because no file existed
        int rebuilt = 0; // plans rebuilt over a corrupt or mismatched file
    };
    const Stats& stats() const { return stats_; }
    void reset_stats() { stats_ = Stats{}; }

    const std::filesystem::path& directory() const { return dir_; }
    std::filesystem::path path_for(int n, const SkewParams& p) const;

    static std::string cache_key(int n, const SkewParams& p);

private:
    std::filesystem::path dir_;
    Stats stats_;
};

// Serialization of a single plan node (children excluded).
void save_plan(std::ostream& out, const TransformPlan& plan);

// Reads one plan node; children must be supplied by the caller. Throws
// MalformedFile on any structural problem.
struct LoadedPlanHeader {
    int kind = 0;
    int n = 0;
    std::string r, s, t;
};
LoadedPlanHeader read_plan_header(std::istream& in);

std::shared_ptr<const TransformPlan>
load_plan_body(std::istream& in, const LoadedPlanHeader& header,
               const SkewParams& params,
               const std::array<std::shared_ptr<const TransformPlan>, 8>& children);

} // namespace fcct
