#pragma once

// Coincidence-count data: simulation from a state, the CSV file format, and
// estimators for Pauli expectations, covariances, G and K.
//
// Every expectation is estimated from one four-setting group: the settings
// formed by the eigenbases of sigma_i on arm A and sigma_j on arm B. Counts in
// a group are normalized by the group total, so no equal-flux assumption is
// made across groups. Marginals <sigma_i x I> and <I x sigma_j> come from the
// diagonal groups (i, i) and (j, j).

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lurq/measures.hpp"
#include "lurq/optics.hpp"

namespace lurq {

struct Setting {
    BasisLabel a = BasisLabel::H;
    BasisLabel b = BasisLabel::H;

    // Canonical position in the H, V, D, A, R, L x H, V, D, A, R, L order.
    int ordinal() const noexcept { return 6 * static_cast<int>(a) + static_cast<int>(b); }

    friend auto operator<=>(const Setting&, const Setting&) = default;
};

std::string to_string(Setting s);

// All 36 analyzer pairs, canonical order.
std::vector<Setting> full_settings();
// The 12 settings K estimation needs: the complete (H,V), (D,A) and (R,L)
// diagonal groups.
std::vector<Setting> k_mode_settings();

enum class NoiseModel { Exact, Poisson };

std::string_view to_string(NoiseModel noise);
std::optional<NoiseModel> parse_noise_model(std::string_view text);

struct CountsMetadata {
    std::string source;
    std::optional<NoiseModel> noise;
    std::optional<RandomSeed> seed;

    friend bool operator==(const CountsMetadata&, const CountsMetadata&) = default;
};

class CountsTable {
public:
    // Throws DuplicateSetting if s is present; InvalidArgument on a negative
    // or non-finite count.
    void insert(Setting s, double count);
    // Inserts or overwrites.
    void assign(Setting s, double count);

    // Throws MissingSetting naming s.
    double at(Setting s) const;
    bool contains(Setting s) const { return counts_.contains(s); }
    std::size_t size() const noexcept { return counts_.size(); }
    const std::map<Setting, double>& entries() const noexcept { return counts_; }

    bool is_full() const;
    bool has_k_mode() const;
    // Exact-expectation tables carry no counting noise.
    bool is_exact() const noexcept { return metadata.noise == NoiseModel::Exact; }

    CountsMetadata metadata;

    friend bool operator==(const CountsTable&, const CountsTable&) = default;

private:
    std::map<Setting, double> counts_;
};

struct EstimatedValue {
    double value = 0.0;
    // One standard deviation, first-order Poisson propagation.
    double sigma = 0.0;
};

struct SimConfig {
    double n_per_setting = 1.0;
    NoiseModel noise = NoiseModel::Exact;
    RandomSeed seed{};
};

// Exact mode stores n * <P_ab> unrounded. Poisson mode draws each setting
// from its own substream of cfg.seed keyed by the setting ordinal, so the
// table does not depend on the order of `settings`.
CountsTable simulate_counts(const DensityMatrix& rho, std::span<const Setting> settings, const SimConfig& cfg);

// Format: optional "# key: value" metadata comments (source, noise, seed),
// other "#" comments, the header "basis_a,basis_b,count", then one row per
// setting.
CountsTable parse_counts_csv(std::string_view text);
std::string write_counts_csv(const CountsTable& table);

enum class Side { A, B };

EstimatedValue joint_expectation(const CountsTable& table, PauliIndex i, PauliIndex j);
EstimatedValue marginal_expectation(const CountsTable& table, Side side, PauliIndex i);

// delta_g propagates the counts as independent Poisson variables through
// central differences with step max(1, sqrt(count)). Exact tables get 0.
GResult g_from_counts(const CountsTable& table);
KResult k_from_counts(const CountsTable& table, const SchmidtCoeffs& s);

}  // namespace lurq
