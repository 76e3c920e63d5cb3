#include "gradtomo/edges.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gradtomo/errors.hpp"

namespace gradtomo {

namespace {

// Index-space step (drow, dcol) for each 45-degree sector of the physical direction.
// Physical +x2 is row -1.
constexpr std::array<std::array<int, 2>, 8> kSectorSteps = {{
    {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1},
}};

double value_or_zero(std::span<const double> img, std::size_t n, long row, long col) {
    const auto sn = static_cast<long>(n);
    if (row < 0 || col < 0 || row >= sn || col >= sn) return 0.0;
    return img[static_cast<std::size_t>(row) * n + static_cast<std::size_t>(col)];
}

std::vector<std::pair<long, long>> disk_offsets(double radius) {
    std::vector<std::pair<long, long>> offsets;
    const auto r = static_cast<long>(std::floor(radius));
    for (long dr = -r; dr <= r; ++dr)
        for (long dc = -r; dc <= r; ++dc)
            if (static_cast<double>(dr * dr + dc * dc) <= radius * radius) offsets.emplace_back(dr, dc);
    return offsets;
}

// Fraction of `from` pixels that have a `to` pixel within the offsets.
double matched_fraction(const EdgeMap& from, const EdgeMap& to, const std::vector<std::pair<long, long>>& offsets) {
    const std::size_t n = from.n();
    const auto sn = static_cast<long>(n);
    std::size_t total = 0;
    std::size_t matched = 0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (!from.at(r, c)) continue;
            ++total;
            for (const auto& [dr, dc] : offsets) {
                const long rr = static_cast<long>(r) + dr;
                const long cc = static_cast<long>(c) + dc;
                if (rr < 0 || cc < 0 || rr >= sn || cc >= sn) continue;
                if (to.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc))) {
                    ++matched;
                    break;
                }
            }
        }
    }
    return total == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(total);
}

}  // namespace

ImageGrid nonmax_suppress(const GradientField& gf) {
    const ImageGrid magnitude = gradient_magnitude(gf);
    const std::size_t n = magnitude.n();
    const auto mag = magnitude.values();
    const auto gx = gf.gx().values();
    const auto gy = gf.gy().values();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t i = r * n + c;
            const double m = mag[i];
            if (m == 0.0) continue;
            const double angle = std::atan2(gy[i], gx[i]);
            const long sector = std::lround(angle / (std::numbers::pi / 4.0));
            const auto& step = kSectorSteps[static_cast<std::size_t>(((sector % 8) + 8) % 8)];
            const auto row = static_cast<long>(r);
            const auto col = static_cast<long>(c);
            const double ahead = value_or_zero(mag, n, row + step[0], col + step[1]);
            const double behind = value_or_zero(mag, n, row - step[0], col - step[1]);
            if (ahead > m || behind > m) continue;
            out[i] = m;
        }
    }
    return ImageGrid(magnitude.spec(), std::move(out));
}

EdgeMap hysteresis(const ImageGrid& nms, double low, double high) {
    if (!(low >= 0.0) || !(high >= low))
        throw std::invalid_argument("hysteresis needs 0 <= low <= high, got low=" + std::to_string(low) +
                                    " high=" + std::to_string(high));
    const std::size_t n = nms.n();
    const auto v = nms.values();
    std::vector<std::uint8_t> keep(n * n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n * n; ++i) {
        if (v[i] > 0.0 && v[i] >= high) {
            keep[i] = 1;
            stack.push_back(i);
        }
    }
    const auto sn = static_cast<long>(n);
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        const auto r = static_cast<long>(i / n);
        const auto c = static_cast<long>(i % n);
        for (long dr = -1; dr <= 1; ++dr) {
            for (long dc = -1; dc <= 1; ++dc) {
                const long rr = r + dr;
                const long cc = c + dc;
                if ((dr == 0 && dc == 0) || rr < 0 || cc < 0 || rr >= sn || cc >= sn) continue;
                const std::size_t j = static_cast<std::size_t>(rr) * n + static_cast<std::size_t>(cc);
                if (keep[j] || !(v[j] > 0.0 && v[j] >= low)) continue;
                keep[j] = 1;
                stack.push_back(j);
            }
        }
    }
    return EdgeMap(n, std::move(keep));
}

EdgeMap canny_from_gradient(const GradientField& gf, double low_frac, double high_frac) {
    if (!(low_frac >= 0.0 && low_frac <= high_frac && high_frac <= 1.0))
        throw std::invalid_argument("canny needs 0 <= low_frac <= high_frac <= 1");
    const ImageGrid nms = nonmax_suppress(gf);
    const auto values = nms.values();
    const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
    if (peak <= 0.0) return EdgeMap(nms.n(), std::vector<std::uint8_t>(nms.n() * nms.n(), 0));
    std::vector<double> normalized(values.begin(), values.end());
    for (auto& x : normalized) x /= peak;
    return hysteresis(ImageGrid(nms.spec(), std::move(normalized)), low_frac, high_frac);
}

EdgeScore edge_f1(const EdgeMap& pred, const EdgeMap& truth, double match_radius) {
    if (pred.n() != truth.n())
        throw GeometryError("edge maps differ in size: " + std::to_string(pred.n()) + " vs " +
                            std::to_string(truth.n()));
    if (!(match_radius >= 0.0)) throw std::invalid_argument("match radius must be >= 0");
    const auto offsets = disk_offsets(match_radius);
    EdgeScore score;
    score.precision = matched_fraction(pred, truth, offsets);
    score.recall = matched_fraction(truth, pred, offsets);
    const double denom = score.precision + score.recall;
    score.f1 = (score.precision == 0.0 || score.recall == 0.0) ? 0.0 : 2.0 * score.precision * score.recall / denom;
    return score;
}

}  // namespace gradtomo
