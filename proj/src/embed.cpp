#include "rwlab/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

namespace rwlab {

EmbeddingEnsemble::EmbeddingEnsemble(std::shared_ptr<const VertexSubset> ground, double tau, int64_t m,
                                     uint64_t seed)
    : ground_(std::move(ground)), tau_(tau), m_(m), seed_(seed) {
    if (m < 1) throw std::invalid_argument("ensemble needs at least one sample");
    coords_.assign(ground_->size() * static_cast<size_t>(m), 0.0f);
    provenance_.resize(static_cast<size_t>(m));
}

void EmbeddingEnsemble::set_sample(int64_t i, const CoordinateMap& f) {
    if (f.values.size() != ground_->size()) throw std::invalid_argument("coordinate map size mismatch");
    for (size_t j = 0; j < ground_->size(); ++j) {
        coords_[j * static_cast<size_t>(m_) + static_cast<size_t>(i)] = static_cast<float>(f.values[j]);
    }
    provenance_[static_cast<size_t>(i)] = {f.radius, f.perm_digest, f.bernoulli_digest};
}

double EmbeddingEnsemble::distance_sq(Vertex x, Vertex y) const {
    auto cx = coords_of(x);
    auto cy = coords_of(y);
    double acc = 0;
    for (int64_t i = 0; i < m_; ++i) {
        double d = static_cast<double>(cx[i]) - static_cast<double>(cy[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(m_);
}

std::pair<double, double> EmbeddingEnsemble::distance_sq_with_stderr(Vertex x, Vertex y) const {
    auto cx = coords_of(x);
    auto cy = coords_of(y);
    double acc = 0, acc2 = 0;
    for (int64_t i = 0; i < m_; ++i) {
        double d = static_cast<double>(cx[i]) - static_cast<double>(cy[i]);
        acc += d * d;
        acc2 += d * d * d * d;
    }
    double n = static_cast<double>(m_);
    double mean = acc / n;
    double var = m_ > 1 ? std::max(0.0, (acc2 - n * mean * mean) / (n - 1)) : 0.0;
    return {mean, std::sqrt(var / n)};
}

std::vector<double> EmbeddingEnsemble::scaled_point(Vertex v) const {
    auto c = coords_of(v);
    double scale = 1.0 / std::sqrt(static_cast<double>(m_));
    std::vector<double> out(c.size());
    for (size_t i = 0; i < c.size(); ++i) out[i] = c[i] * scale;
    return out;
}

EmbeddingEnsemble threshold_map(const Graph& g, const VertexSubset& ground, double tau, int64_t m,
                                uint64_t seed) {
    auto shared = std::make_shared<const VertexSubset>(ground);
    EmbeddingEnsemble e(shared, tau, m, seed);
    for (int64_t i = 0; i < m; ++i) {
        auto p = ball_carving_partition(g, *shared, tau, seed, static_cast<uint64_t>(i));
        CounterRng bern(seed ^ 0x5bd1e995u, static_cast<uint64_t>(i));
        e.set_sample(i, coordinate_map(g, *shared, p, bern));
    }
    return e;
}

std::vector<EmbeddingEnsemble> scale_family(const Graph& g, const VertexSubset& ground, int k_max,
                                            int64_t m, uint64_t seed) {
    std::vector<EmbeddingEnsemble> out;
    double tau = 1;
    for (int k = 1; k <= k_max; ++k) {
        tau *= 8;
        out.push_back(threshold_map(g, ground, tau, m, seed + static_cast<uint64_t>(k)));
    }
    return out;
}

double colipschitz_target(const Graph& g, Vertex x, int k) {
    double tau = std::pow(8.0, k);
    return tau / (128.0 * (1.0 + growth_profile(g, x, k)));
}

namespace {

struct Frac {
    int64_t num = 0;
    int64_t den = 1;

    static int64_t gcd64(int64_t a, int64_t b) {
        while (b) {
            int64_t t = a % b;
            a = b;
            b = t;
        }
        return a < 0 ? -a : a;
    }
    static Frac make(int64_t n, int64_t d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        int64_t g = gcd64(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        return {n, d};
    }
    Frac operator+(const Frac& o) const { return make(num * o.den + o.num * den, den * o.den); }
    Frac operator-(const Frac& o) const { return make(num * o.den - o.num * den, den * o.den); }
    Frac operator*(const Frac& o) const { return make(num * o.num, den * o.den); }
    Frac operator/(const Frac& o) const { return make(num * o.den, den * o.num); }
    bool operator<(const Frac& o) const { return num * o.den < o.num * den; }
    bool operator<=(const Frac& o) const { return num * o.den <= o.num * den; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

} // namespace

OracleValue exact_pair_distance_sq(const Graph& g, const VertexSubset& ground, double tau, Vertex x,
                                   Vertex y) {
    size_t n = ground.size();
    if (n > 6) throw std::invalid_argument("enumeration oracle limited to 6 points");
    if (!ground.contains(x) || !ground.contains(y)) throw std::invalid_argument("pair outside ground");
    if (x == y) return {0.0, 0, 1};

    // tau as an exact rational (desk taus are small integers or halves).
    auto tau_frac = Frac::make(static_cast<int64_t>(std::llround(tau * 16)), 16);
    if (std::abs(tau_frac.to_double() - tau) > 1e-12) {
        throw std::invalid_argument("oracle needs tau representable in sixteenths");
    }

    const auto& pts = ground.members();
    std::vector<std::vector<int64_t>> d(n, std::vector<int64_t>(n));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            int64_t dij = distance(g, pts[i], pts[j]);
            if (dij == kInfiniteDistance) throw std::invalid_argument("oracle ground must be connected");
            d[i][j] = dij;
        }
    }

    Frac lo = tau_frac * Frac{1, 4};
    Frac hi = tau_frac * Frac{1, 2};

    // R-breakpoints: integer distances falling inside [lo, hi).
    std::vector<Frac> cuts{lo};
    for (int64_t v = static_cast<int64_t>(lo.to_double()) ; v <= static_cast<int64_t>(hi.to_double()) + 1; ++v) {
        Frac f{v, 1};
        if (lo < f && f < hi) cuts.push_back(f);
    }
    cuts.push_back(hi);

    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    int64_t perms = 1;
    for (size_t i = 2; i <= n; ++i) perms *= static_cast<int64_t>(i);

    Frac total{0, 1};
    Frac range = hi - lo;
    size_t xi = static_cast<size_t>(ground.index_of(x));
    size_t yi = static_cast<size_t>(ground.index_of(y));
    do {
        for (size_t c = 0; c + 1 < cuts.size(); ++c) {
            Frac width = cuts[c + 1] - cuts[c];
            if (width.num == 0) continue;
            // Representative R = midpoint of the open interval; the carve
            // outcome is constant across it because all thresholds are the
            // integer cut points.
            Frac R = (cuts[c] + cuts[c + 1]) * Frac{1, 2};
            std::vector<int32_t> block(n, -1);
            int32_t nblocks = 0;
            for (size_t pi : perm) {
                bool used = false;
                for (size_t j = 0; j < n; ++j) {
                    if (block[j] < 0 && Frac{d[pi][j], 1} <= R) {
                        block[j] = nblocks;
                        used = true;
                    }
                }
                if (used) ++nblocks;
            }
            Frac term{0, 1};
            if (nblocks > 1) {
                auto dist_out = [&](size_t i) {
                    int64_t best = std::numeric_limits<int64_t>::max();
                    for (size_t j = 0; j < n; ++j) {
                        if (block[j] != block[i]) best = std::min(best, d[i][j]);
                    }
                    return best;
                };
                int64_t dx = dist_out(xi);
                int64_t dy = dist_out(yi);
                if (block[xi] == block[yi]) {
                    // Same alpha: E (alpha (dx - dy))^2 = (dx - dy)^2 / 2.
                    term = Frac{(dx - dy) * (dx - dy), 2};
                } else {
                    // Independent fair bits: dx^2/2 + dy^2/2 - dx dy / 2.
                    term = Frac{dx * dx + dy * dy - dx * dy, 2};
                }
            }
            total = total + term * (width / range);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    total = total / Frac{perms, 1};
    return {total.to_double(), total.num, total.den};
}

void save_ensemble(const std::filesystem::path& stem, const EmbeddingEnsemble& e) {
    nlohmann::json meta;
    meta["tau"] = e.tau();
    meta["m"] = e.sample_count();
    meta["seed"] = e.seed();
    meta["ground"] = e.ground().members();
    nlohmann::json prov = nlohmann::json::array();
    for (const auto& s : e.provenance()) {
        prov.push_back({{"radius", s.radius}, {"perm", s.perm_digest}, {"bern", s.bernoulli_digest}});
    }
    meta["samples"] = std::move(prov);

    auto meta_path = stem;
    meta_path += ".ensemble.json";
    std::ofstream mo(meta_path);
    if (!mo) throw std::runtime_error("cannot write " + meta_path.string());
    mo << meta.dump(2) << "\n";

    auto bin_path = stem;
    bin_path += ".coords.bin";
    std::ofstream bo(bin_path, std::ios::binary);
    if (!bo) throw std::runtime_error("cannot write " + bin_path.string());
    for (Vertex v : e.ground().members()) {
        auto row = e.coords_of(v);
        bo.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
}

EmbeddingEnsemble load_ensemble(const std::filesystem::path& stem, const Graph& g) {
    auto meta_path = stem;
    meta_path += ".ensemble.json";
    std::ifstream mi(meta_path);
    if (!mi) throw std::runtime_error("cannot read " + meta_path.string());
    nlohmann::json meta = nlohmann::json::parse(mi);

    auto ground = std::make_shared<const VertexSubset>(g, meta["ground"].get<std::vector<Vertex>>());
    EmbeddingEnsemble e(ground, meta["tau"].get<double>(), meta["m"].get<int64_t>(),
                        meta["seed"].get<uint64_t>());

    auto bin_path = stem;
    bin_path += ".coords.bin";
    std::ifstream bi(bin_path, std::ios::binary);
    if (!bi) throw std::runtime_error("cannot read " + bin_path.string());
    int64_t m = e.sample_count();
    CoordinateMap f;
    f.values.resize(ground->size());
    std::vector<std::vector<double>> cols(static_cast<size_t>(m), std::vector<double>(ground->size()));
    std::vector<float> row(static_cast<size_t>(m));
    for (size_t j = 0; j < ground->size(); ++j) {
        bi.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (!bi) throw std::runtime_error("coordinate file truncated");
        for (int64_t i = 0; i < m; ++i) cols[static_cast<size_t>(i)][j] = row[static_cast<size_t>(i)];
    }
    const auto& prov = meta["samples"];
    for (int64_t i = 0; i < m; ++i) {
        f.values = cols[static_cast<size_t>(i)];
        f.radius = prov[static_cast<size_t>(i)]["radius"].get<double>();
        f.perm_digest = prov[static_cast<size_t>(i)]["perm"].get<uint64_t>();
        f.bernoulli_digest = prov[static_cast<size_t>(i)]["bern"].get<uint64_t>();
        e.set_sample(i, f);
    }
    return e;
}

} // namespace rwlab
