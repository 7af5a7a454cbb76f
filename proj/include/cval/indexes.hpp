#pragma once

#include "cval/matrix.hpp"
#include "cval/partition.hpp"

#include <span>
#include <string>
#include <vector>

namespace cval {

// Everything that can be selected, calibrated, or aggregated.  CVNN and the
// stability statistics live in the same id space so composite specs can
// reference them uniformly.
enum class Criterion {
    ASW,
    CH,
    Dunn,
    CVNN,
    PearsonGamma,
    AveWithin,
    SepIndex,
    WidestGap,
    Entropy,
    PS,
    Bootstab,
};

inline constexpr Criterion kAllCriteria[] = {
    Criterion::ASW,      Criterion::CH,        Criterion::Dunn,     Criterion::CVNN,
    Criterion::PearsonGamma, Criterion::AveWithin, Criterion::SepIndex, Criterion::WidestGap,
    Criterion::Entropy,  Criterion::PS,        Criterion::Bootstab,
};

const char* criterion_name(Criterion c);
bool parse_criterion(const std::string& s, Criterion& out);

// true when larger raw values mean better clustering quality
bool larger_is_better(Criterion c);

// Degenerate evaluations (empty denominators, zero variances) are reported as
// non-finite values; calibration and selection must skip them.
inline bool is_degenerate(double v) { return !std::isfinite(v); }

struct IndexParams {
    double p = 0.1;  // separation-index border fraction
    int kappa = 10;  // CVNN neighbourhood size
};

double asw(const DissimilarityMatrix& d, const Partition& part);
double calinski_harabasz(const DissimilarityMatrix& d, const Partition& part);
double dunn(const DissimilarityMatrix& d, const Partition& part);
double pearson_gamma(const DissimilarityMatrix& d, const Partition& part);
double ave_within(const DissimilarityMatrix& d, const Partition& part);
double sep_index(const DissimilarityMatrix& d, const Partition& part, double p);
double widest_gap(const DissimilarityMatrix& d, const Partition& part);
double entropy(const Partition& part);

// Per-point nearest-neighbour orderings, built once per dissimilarity matrix
// and shared across CVNN evaluations.  neighbours[i] lists the other points
// ordered by (distance, index).
class NeighborTable {
public:
    NeighborTable() = default;
    NeighborTable(const DissimilarityMatrix& d, int max_kappa);
    std::span<const int> neighbours(std::size_t i) const {
        return {order_.data() + i * k_, static_cast<std::size_t>(k_)};
    }
    int max_kappa() const { return k_; }

private:
    std::size_t k_ = 0;
    std::vector<int> order_;
};

struct CvnnComponents {
    double sep;  // in [0,1]
    double com;
};

CvnnComponents cvnn_components(const DissimilarityMatrix& d, const Partition& part, int kappa);
CvnnComponents cvnn_components(const NeighborTable& nt, const DissimilarityMatrix& d, const Partition& part,
                               int kappa);

// Normalise a collection of (sep, com) pairs by their maxima and sum the two
// terms; smaller is better.  A zero maximum makes that term 0 for all.
std::vector<double> cvnn_aggregate(std::span<const CvnnComponents> parts);

}  // namespace cval
