#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lddkit/graph.hpp"
#include "lddkit/oracles.hpp"
#include "lddkit/rng.hpp"

namespace lddkit {

// ---------------------------------------------------------------------------
// Cluster label codes.
//
// A code maps b-bit cluster identifiers to m-bit labels and declares a
// pairwise Hamming distance: any two distinct identifiers receive labels
// differing in at least `distance` positions. The distance claim is verified
// at construction, never assumed: both shipped codes are affine over GF(2)
// (label(x) xor label(y) depends only on x xor y, which the verifier
// spot-checks), so enumerating nonzero differences is equivalent to checking
// all pairs. For b <= 14 the enumeration is exhaustive; for wider
// identifiers every single-bit difference plus a fixed-seed sample is
// checked, which is exactly the set of minimum-weight differences for the
// shipped constructions.
// ---------------------------------------------------------------------------

struct ClusterCode {
    int b = 0;         // identifier width in bits
    int m = 0;         // label width in bits
    int distance = 1;  // verified pairwise Hamming distance

    // Label of an identifier; position p of the result holds bit p.
    // Identifiers must fit in b bits.
    std::function<std::vector<char>(uint64_t)> encode;
};

// Identity labeling: m = b, the label is the identifier itself, distance 1.
ClusterCode raw_id_code(int b);

// Ten-fold repetition: the identifier is XORed against ten fixed public
// masks (folded to b bits) and the ten blocks are concatenated, so m = 10*b
// and any two distinct identifiers differ in at least 10 positions.
ClusterCode repetition_code(int b);

// Distance verification used by the factories, exposed for tests: throws
// GuaranteeError when some checked pair of identifiers violates the declared
// distance or the affinity spot-check fails.
void verify_code(const ClusterCode& code);

// ---------------------------------------------------------------------------
// The embedding: one coordinate per (scale, partition, bit position).
//
// Scales are D = 2^i for i in [i_min, i_max] with i_max = ceil(log2(n*lmax))
// and i_min = -(ceil(log2 q) + 1), where q bounds every cluster diameter by
// q*D over all computed scales. Positive scales carry sparse covers of t
// partitions each; scales with D < 1 shortcut to t copies of the singleton
// partition, since every ball of radius below the minimum edge length is a
// single node. Within a partition each cluster is labeled by encoding the
// minimum node id it contains, and bit p contributes the coordinate
// phi = potential_oracle(S, 1) for S = {v : bit p of v's cluster label is 0}
// (zero when S is empty). Every coordinate is 1-Lipschitz across edges,
// enforced exactly at construction.
// ---------------------------------------------------------------------------

struct CoordProv {
    int scale = 0;      // exponent i of the scale D = 2^i
    int partition = 0;  // partition index within the scale, in [0, t)
    int bit = 0;        // bit position within the label, in [0, m)
};

struct EmbedPartition {
    std::vector<int32_t> cluster_of;       // per node; -1 for inactive nodes
    std::vector<char> padded;              // per node: B(v, D) inside v's cluster
    std::vector<std::vector<char>> label;  // per cluster, m bits
    int coord_base = 0;                    // coordinate index of bit 0
};

struct EmbedScale {
    int index = 0;  // i with D = 2^i
    Rat D;
    std::vector<EmbedPartition> parts;  // exactly t partitions
};

struct Embedding {
    int dims = 0;
    std::vector<std::vector<i128>> x;   // per node, dims nonnegative entries
    std::vector<CoordProv> provenance;  // per coordinate
    std::vector<EmbedScale> scales;     // ascending by index
    ClusterCode code;
    Rat q;      // every cluster at every scale has diameter <= q * D
    int t = 0;  // partitions per scale
};

struct EmbedOptions {
    const ClusterCode* code = nullptr;  // null -> raw identifiers
    Rat eps = Rat(-1);                  // forwarded to the cover machinery
    int rounds = 0;                     // override partitions per scale
    DistOptions dist;
    Mode mode = Mode::det();
};

// Requires a connected subgraph, unique node ids, and lengths >= 1.
Embedding l1_embed(const Subgraph& G, const EmbedOptions& opt = {}, OracleCtx* ctx = nullptr);

// ---------------------------------------------------------------------------
// Distortion accounting. For every tested pair u != v the report certifies
// the lower bound the construction promises before trusting any ratio: at
// the bracketing scale (largest D_i < d(u,v)/q) at least ceil(t/3)
// partitions pad both endpoints into distinct clusters, and each such
// partition contributes at least `distance` coordinates with gap >= D_i/2.
// Any miss throws GuaranteeError with the offending pair. All pairs are
// tested exactly up to 512 active nodes; above that a fixed-seed sample is
// used and the report says so.
// ---------------------------------------------------------------------------

struct PairWitness {
    NodeId u = NO_NODE, v = NO_NODE;
    Rat ratio;
};

struct DistortionReport {
    Rat max_expansion;         // max ||x_u - x_v||_1 / d(u,v)
    PairWitness expansion;
    Rat max_contraction;       // max d(u,v) / ||x_u - x_v||_1
    PairWitness contraction;
    bool exact = true;         // all pairs vs fixed-seed sample
    long long pairs_tested = 0;
};

DistortionReport distortion_report(const Subgraph& G, const Embedding& E,
                                   OracleCtx* ctx = nullptr);

}  // namespace lddkit
