#include "lurq/counts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

namespace lurq {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(RandomSeed master, int ordinal) {
    return splitmix64(master.value ^ splitmix64(static_cast<std::uint64_t>(ordinal) + 1));
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_count(std::string_view text) {
    if (text.empty() || !(std::isdigit(static_cast<unsigned char>(text[0])) || text[0] == '.')) {
        return std::nullopt;
    }
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v, std::chars_format::general);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::optional<std::uint64_t> parse_u64(std::string_view text) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
        return std::nullopt;
    }
    return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void parse_fail(ErrorCode code, std::size_t line, const std::string& what) {
    throw Error(code, "line " + std::to_string(line) + ": " + what);
}

// Four settings of the group for sigma_i (arm A) x sigma_j (arm B), in the
// order ++, +-, -+, --.
std::array<Setting, 4> group_settings(PauliIndex i, PauliIndex j) {
    const auto [ap, am] = eigenbasis(i);
    const auto [bp, bm] = eigenbasis(j);
    return {Setting{ap, bp}, Setting{ap, bm}, Setting{am, bp}, Setting{am, bm}};
}

struct GroupCounts {
    std::array<double, 4> n{};
    double total = 0.0;
};

GroupCounts read_group(const CountsTable& table, PauliIndex i, PauliIndex j) {
    GroupCounts g;
    const auto settings = group_settings(i, j);
    for (std::size_t k = 0; k < 4; ++k) {
        g.n[k] = table.at(settings[k]);
        g.total += g.n[k];
    }
    if (!(g.total > 0.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "settings group " + to_string(settings[0]) + ".." + to_string(settings[3]) + " has no counts");
    }
    return g;
}

// Weighted sign average sum_k s_k n_k / N with first-order Poisson error.
EstimatedValue signed_average(const GroupCounts& g, const std::array<double, 4>& signs, bool exact) {
    double acc = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        acc += signs[k] * g.n[k];
    }
    EstimatedValue out;
    out.value = acc / g.total;
    if (!exact) {
        double var = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            const double d = (signs[k] - out.value) / g.total;
            var += d * d * g.n[k];
        }
        out.sigma = std::sqrt(var);
    }
    return out;
}

constexpr std::array<double, 4> kJointSigns = {1.0, -1.0, -1.0, 1.0};
constexpr std::array<double, 4> kSideASigns = {1.0, 1.0, -1.0, -1.0};
constexpr std::array<double, 4> kSideBSigns = {1.0, -1.0, 1.0, -1.0};

CovarianceMatrix covariance_from_counts(const CountsTable& table) {
    std::array<double, 3> ma{};
    std::array<double, 3> mb{};
    for (int i = 1; i <= 3; ++i) {
        const GroupCounts diag = read_group(table, PauliIndex(i), PauliIndex(i));
        ma[static_cast<std::size_t>(i - 1)] = signed_average(diag, kSideASigns, true).value;
        mb[static_cast<std::size_t>(i - 1)] = signed_average(diag, kSideBSigns, true).value;
    }
    CovarianceMatrix c;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            const double joint = signed_average(read_group(table, PauliIndex(i), PauliIndex(j)), kJointSigns, true).value;
            c(i - 1, j - 1) = joint - ma[static_cast<std::size_t>(i - 1)] * mb[static_cast<std::size_t>(j - 1)];
        }
    }
    return c;
}

std::array<double, 4> k_expectations_from_counts(const CountsTable& table, const SchmidtCoeffs& s) {
    const PauliIndex x(1), y(2), z(3);
    const GroupCounts zz = read_group(table, z, z);
    const GroupCounts xx = read_group(table, x, x);
    const GroupCounts yy = read_group(table, y, y);
    // Group order is ++, +-, -+, --.
    const double p00 = zz.n[0] / zz.total;
    const double p01 = zz.n[1] / zz.total;
    const double p10 = zz.n[2] / zz.total;
    const double p11 = zz.n[3] / zz.total;
    const double p_dd = xx.n[0] / xx.total;
    const double p_aa = xx.n[3] / xx.total;
    const double p_rl = yy.n[1] / yy.total;
    const double p_lr = yy.n[2] / yy.total;
    // <|00><11| + h.c.> = p(RL) + p(LR) + p(DD) + p(AA) - 1
    const double coh_00_11 = p_rl + p_lr + p_dd + p_aa - 1.0;
    // <|01><10| + h.c.> = p(DD) + p(AA) - p(RL) - p(LR)
    const double coh_01_10 = p_dd + p_aa - p_rl - p_lr;

    const double a = s.a();
    const double b = s.b();
    return {a * a * p00 + b * b * p11 + a * b * coh_00_11,
            a * a * p01 + b * b * p10 + a * b * coh_01_10,
            b * b * p01 + a * a * p10 - a * b * coh_01_10,
            b * b * p00 + a * a * p11 - a * b * coh_00_11};
}

// First-order propagation of independent Poisson counts through f by
// central differences.
template <typename F>
double propagate_poisson(const CountsTable& table, F&& f) {
    double var = 0.0;
    CountsTable probe = table;
    for (const auto& [setting, n] : table.entries()) {
        if (n <= 0.0) {
            continue;
        }
        const double h = std::max(1.0, std::sqrt(n));
        // The downward step stays inside the count so no group total can
        // reach zero.
        const double h_down = std::min(h, 0.5 * n);
        probe.assign(setting, n + h);
        const double up = f(probe);
        probe.assign(setting, n - h_down);
        const double down = f(probe);
        probe.assign(setting, n);
        const double d = (up - down) / (h + h_down);
        var += d * d * n;
    }
    return std::sqrt(var);
}

}  // namespace

std::string to_string(Setting s) { return {to_char(s.a), to_char(s.b)}; }

std::vector<Setting> full_settings() {
    std::vector<Setting> out;
    out.reserve(36);
    for (BasisLabel a : kAllLabels) {
        for (BasisLabel b : kAllLabels) {
            out.push_back({a, b});
        }
    }
    return out;
}

std::vector<Setting> k_mode_settings() {
    std::vector<Setting> out;
    for (int i : {3, 1, 2}) {
        const auto group = group_settings(PauliIndex(i), PauliIndex(i));
        out.insert(out.end(), group.begin(), group.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string_view to_string(NoiseModel noise) { return noise == NoiseModel::Exact ? "exact" : "poisson"; }

std::optional<NoiseModel> parse_noise_model(std::string_view text) {
    if (text == "exact") return NoiseModel::Exact;
    if (text == "poisson") return NoiseModel::Poisson;
    return std::nullopt;
}

void CountsTable::insert(Setting s, double count) {
    if (counts_.contains(s)) {
        throw Error(ErrorCode::DuplicateSetting, "setting " + to_string(s) + " appears twice");
    }
    assign(s, count);
}

void CountsTable::assign(Setting s, double count) {
    if (!std::isfinite(count) || count < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "count for " + to_string(s) + " must be a non-negative number");
    }
    counts_[s] = count;
}

double CountsTable::at(Setting s) const {
    const auto it = counts_.find(s);
    if (it == counts_.end()) {
        throw Error(ErrorCode::MissingSetting, "setting " + to_string(s) + " is absent");
    }
    return it->second;
}

bool CountsTable::is_full() const {
    const auto all = full_settings();
    return std::all_of(all.begin(), all.end(), [this](Setting s) { return contains(s); });
}

bool CountsTable::has_k_mode() const {
    const auto all = k_mode_settings();
    return std::all_of(all.begin(), all.end(), [this](Setting s) { return contains(s); });
}

CountsTable simulate_counts(const DensityMatrix& rho, std::span<const Setting> settings, const SimConfig& cfg) {
    if (!(cfg.n_per_setting > 0.0) || !std::isfinite(cfg.n_per_setting)) {
        throw Error(ErrorCode::InvalidArgument, "n_per_setting must be positive");
    }
    CountsTable table;
    table.metadata.source = "simulated";
    table.metadata.noise = cfg.noise;
    if (cfg.noise == NoiseModel::Poisson) {
        table.metadata.seed = cfg.seed;
    }
    for (const Setting& s : settings) {
        const double p = std::max(0.0, expectation_value(rho, joint_projector(s.a, s.b)));
        const double mean = cfg.n_per_setting * p;
        double count = mean;
        if (cfg.noise == NoiseModel::Poisson) {
            if (mean > 0.0) {
                std::mt19937_64 rng(substream_seed(cfg.seed, s.ordinal()));
                std::poisson_distribution<std::int64_t> draw(mean);
                count = static_cast<double>(draw(rng));
            } else {
                count = 0.0;
            }
        }
        table.insert(s, count);
    }
    return table;
}

CountsTable parse_counts_csv(std::string_view text) {
    CountsTable table;
    bool seen_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    // Skip a UTF-8 byte order mark.
    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        pos = 3;
    }
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const std::string_view body = trim(line.substr(1));
            const auto colon = body.find(':');
            if (colon == std::string_view::npos) {
                continue;
            }
            const std::string_view key = trim(body.substr(0, colon));
            const std::string_view value = trim(body.substr(colon + 1));
            if (key == "source") {
                table.metadata.source = std::string(value);
            } else if (key == "noise") {
                const auto noise = parse_noise_model(value);
                if (!noise) {
                    parse_fail(ErrorCode::ParseError, line_no, "unknown noise model '" + std::string(value) + "'");
                }
                table.metadata.noise = noise;
            } else if (key == "seed") {
                const auto seed = parse_u64(value);
                if (!seed) {
                    parse_fail(ErrorCode::ParseError, line_no, "seed must be an unsigned 64-bit integer");
                }
                table.metadata.seed = RandomSeed{*seed};
            }
            continue;
        }
        const auto fields = split_fields(line);
        if (!seen_header) {
            if (fields.size() != 3 || fields[0] != "basis_a" || fields[1] != "basis_b" || fields[2] != "count") {
                parse_fail(ErrorCode::ParseError, line_no, "expected header 'basis_a,basis_b,count'");
            }
            seen_header = true;
            continue;
        }
        if (fields.size() != 3) {
            parse_fail(ErrorCode::ParseError, line_no, "expected 3 fields, found " + std::to_string(fields.size()));
        }
        const auto a = parse_basis_label(fields[0]);
        if (!a) {
            parse_fail(ErrorCode::UnknownLabel, line_no, "unknown basis label '" + std::string(fields[0]) + "'");
        }
        const auto b = parse_basis_label(fields[1]);
        if (!b) {
            parse_fail(ErrorCode::UnknownLabel, line_no, "unknown basis label '" + std::string(fields[1]) + "'");
        }
        const auto count = parse_count(fields[2]);
        if (!count) {
            parse_fail(ErrorCode::ParseError, line_no, "count '" + std::string(fields[2]) + "' is not a non-negative decimal");
        }
        const Setting s{*a, *b};
        if (table.contains(s)) {
            parse_fail(ErrorCode::DuplicateSetting, line_no, "setting " + to_string(s) + " appears twice");
        }
        table.insert(s, *count);
    }
    if (!seen_header) {
        throw Error(ErrorCode::ParseError, "missing header 'basis_a,basis_b,count'");
    }
    return table;
}

std::string write_counts_csv(const CountsTable& table) {
    std::ostringstream os;
    if (!table.metadata.source.empty()) {
        os << "# source: " << table.metadata.source << '\n';
    }
    if (table.metadata.noise) {
        os << "# noise: " << to_string(*table.metadata.noise) << '\n';
    }
    if (table.metadata.seed) {
        os << "# seed: " << table.metadata.seed->value << '\n';
    }
    os << "basis_a,basis_b,count\n";
    for (const auto& [s, n] : table.entries()) {
        os << to_char(s.a) << ',' << to_char(s.b) << ',' << format_number(n) << '\n';
    }
    return os.str();
}

EstimatedValue joint_expectation(const CountsTable& table, PauliIndex i, PauliIndex j) {
    return signed_average(read_group(table, i, j), kJointSigns, table.is_exact());
}

EstimatedValue marginal_expectation(const CountsTable& table, Side side, PauliIndex i) {
    return signed_average(read_group(table, i, i), side == Side::A ? kSideASigns : kSideBSigns, table.is_exact());
}

GResult g_from_counts(const CountsTable& table) {
    GResult out;
    out.covariance = covariance_from_counts(table);
    out.g = out.covariance.squaredNorm();
    out.delta_g = table.is_exact()
                      ? 0.0
                      : propagate_poisson(table, [](const CountsTable& t) { return covariance_from_counts(t).squaredNorm(); });
    return out;
}

KResult k_from_counts(const CountsTable& table, const SchmidtCoeffs& s) {
    KResult out = k_from_expectations(k_expectations_from_counts(table, s), s);
    out.delta_k = table.is_exact() ? 0.0 : propagate_poisson(table, [&s](const CountsTable& t) {
        return k_from_expectations(k_expectations_from_counts(t, s), s).k;
    });
    return out;
}

}  // namespace lurq
