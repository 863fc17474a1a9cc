#pragma once

namespace lddkit {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

// Edge lengths are bounded by n^C.
inline constexpr int kMaxLenExponent = 4;

// Padded partitions run the terminal clustering at scale c * log2(n) * D.
// Calibrated on the corpus described in config/calibration.json; the bound
// mu(V_bad) <= mu(V)/10 held for every instance at half this value.
inline constexpr long kPaddedPartitionScale = 4;

// Sparse covers build t = ceil(c * log2 n) partitions. c = 6 makes the
// doubling-weights potential argument go through exactly:
// 2^(floor(t/3)+1) > n * 1.1^t for every n >= 2.
inline constexpr long kCoverRoundFactor = 6;

// Edge cutting shrinks the clustering scale and precision by these factors
// of eps/log^2 n. 1/128 keeps the composed ruling slack within eps*R for
// all legal inputs (lengths <= n^4); see the derivation in the README.
inline constexpr long kEdgeCutC1Den = 128;
inline constexpr long kEdgeCutC2Den = 128;

// Documented benchmark budget for the spanning-tree average stretch:
// K * log2(n)^5. A reported gate, not a per-lemma guarantee.
inline constexpr long kLsstBudgetK = 4;

} // namespace lddkit
