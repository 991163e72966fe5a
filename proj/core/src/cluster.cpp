#include "sst/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sst/parallel.hpp"

namespace sst {

void ClusterConfig::validate() const {
    if (grid < 1) throw std::runtime_error("cluster grid must be >= 1");
    if (per_cell < 1) throw std::runtime_error("per_cell must be >= 1");
    if (iterations < 1) throw std::runtime_error("iterations must be >= 1");
    if (knn < 1) throw std::runtime_error("knn must be >= 1");
    if (window < 0) throw std::runtime_error("window must be >= 0");
    if (threads < 1) throw std::runtime_error("threads must be >= 1");
}

int cell_of(int coord, int extent, int grid) {
    return static_cast<int>(static_cast<long long>(coord) * grid / extent);
}

int cell_span_begin(int cell, int extent, int grid) {
    // first coord with cell_of(coord) == cell
    return static_cast<int>((static_cast<long long>(cell) * extent + grid - 1) / grid);
}

int cell_span_end(int cell, int extent, int grid) {
    return cell_span_begin(cell + 1, extent, grid);
}

double AssociationMatrix::at_dense(size_t pixel, int center) const {
    for (size_t e = row_offsets[pixel]; e < row_offsets[pixel + 1]; ++e)
        if (center_index[e] == center) return weight[e];
    return 0.0;
}

namespace {

// k nearest pixels to (ar, ac) by Euclidean distance, ties by row-major
// index. Grows a Chebyshev ring until the k-th Euclidean neighbor is
// guaranteed inside the searched box.
std::vector<size_t> nearest_pixels(int ar, int ac, int height, int width, int k) {
    std::vector<std::pair<long long, size_t>> candidates;  // (d^2, index)
    const int max_radius = std::max(std::max(ar, height - 1 - ar), std::max(ac, width - 1 - ac));
    for (int r = 0;; ++r) {
        // ring at Chebyshev radius r
        const int y0 = ar - r, y1 = ar + r, x0 = ac - r, x1 = ac + r;
        for (int y = y0; y <= y1; ++y) {
            if (y < 0 || y >= height) continue;
            for (int x = x0; x <= x1; ++x) {
                if (x < 0 || x >= width) continue;
                if (std::max(std::abs(y - ar), std::abs(x - ac)) != r) continue;
                const long long dy = y - ar, dx = x - ac;
                candidates.emplace_back(dy * dy + dx * dx,
                                        static_cast<size_t>(y) * width + x);
            }
        }
        const long long r2 = static_cast<long long>(r) * r;
        size_t within = 0;
        for (const auto& c : candidates)
            if (c.first <= r2) ++within;
        if (within >= static_cast<size_t>(k) || r >= max_radius) break;
    }
    if (candidates.size() < static_cast<size_t>(k))
        throw std::runtime_error("knn exceeds pixel count");
    std::sort(candidates.begin(), candidates.end());
    std::vector<size_t> out(k);
    for (int i = 0; i < k; ++i) out[i] = candidates[i].second;
    return out;
}

}  // namespace

CentroidSet init_centroids(const FeatureMap& features, const ClusterConfig& cfg) {
    cfg.validate();
    const int height = features.height, width = features.width;
    if (cfg.knn > static_cast<int>(features.count()))
        throw std::runtime_error("knn exceeds pixel count");
    if (height < cfg.grid || width < cfg.grid)
        throw std::runtime_error("grid finer than the image (" + std::to_string(cfg.grid) +
                                 " cells over " + std::to_string(height) + "x" +
                                 std::to_string(width) + ")");
    const int sub = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cfg.per_cell))));

    CentroidSet set;
    set.count = cfg.total_centers();
    set.dim = features.dim;
    set.features.assign(static_cast<size_t>(set.count) * set.dim, 0.0);
    set.anchor_row.resize(set.count);
    set.anchor_col.resize(set.count);

    for (int cy = 0; cy < cfg.grid; ++cy) {
        const int rb = cell_span_begin(cy, height, cfg.grid);
        const int re = cell_span_end(cy, height, cfg.grid);
        for (int cx = 0; cx < cfg.grid; ++cx) {
            const int cb = cell_span_begin(cx, width, cfg.grid);
            const int ce = cell_span_end(cx, width, cfg.grid);
            if (re - rb < sub || ce - cb < sub)
                throw std::runtime_error("grid cell " + std::to_string(cy) + "," +
                                         std::to_string(cx) + " is smaller than the " +
                                         std::to_string(sub) + "x" + std::to_string(sub) +
                                         " anchor sub-lattice");
            for (int m = 0; m < cfg.per_cell; ++m) {
                const int la = m / sub, lb = m % sub;
                const int ar = rb + (2 * la + 1) * (re - rb) / (2 * sub);
                const int ac = cb + (2 * lb + 1) * (ce - cb) / (2 * sub);
                const int j = (cy * cfg.grid + cx) * cfg.per_cell + m;
                set.anchor_row[j] = ar;
                set.anchor_col[j] = ac;
                const auto nn = nearest_pixels(ar, ac, height, width, cfg.knn);
                double* dst = set.feature(j);
                for (size_t p : nn) {
                    const double* src = features.row(p);
                    for (int c = 0; c < set.dim; ++c) dst[c] += src[c];
                }
                for (int c = 0; c < set.dim; ++c) dst[c] /= cfg.knn;
            }
        }
    }
    return set;
}

FeatureMap sum_feature_maps(const std::vector<const FeatureMap*>& maps) {
    if (maps.empty()) throw std::runtime_error("no feature maps to sum");
    FeatureMap out = *maps.front();
    for (size_t m = 1; m < maps.size(); ++m) {
        const FeatureMap& f = *maps[m];
        if (f.dim != out.dim || f.count() != out.count())
            throw std::runtime_error("feature map dimension mismatch in sum");
        for (size_t i = 0; i < out.rows.size(); ++i) out.rows[i] += f.rows[i];
    }
    return out;
}

AssociationMatrix compute_associations(const FeatureMap& query, const CentroidSet& centers,
                                       const ClusterConfig& cfg) {
    cfg.validate();
    if (query.dim != centers.dim)
        throw std::runtime_error("query dim " + std::to_string(query.dim) +
                                 " != centroid dim " + std::to_string(centers.dim));
    if (centers.count != cfg.total_centers())
        throw std::runtime_error("centroid count does not match config");

    const int height = query.height, width = query.width;
    const int grid = cfg.grid, per_cell = cfg.per_cell, radius = cfg.window;
    const size_t n = query.count();

    AssociationMatrix assoc;
    assoc.pixels = n;
    assoc.centers = centers.count;
    assoc.row_offsets.assign(n + 1, 0);

    // cell index per coordinate, reused by both passes
    std::vector<int> row_cell(height), col_cell(width);
    for (int y = 0; y < height; ++y) row_cell[y] = cell_of(y, height, grid);
    for (int x = 0; x < width; ++x) col_cell[x] = cell_of(x, width, grid);

    auto window_cells = [&](size_t pixel, auto&& fn) {
        const int py = row_cell[pixel / width];
        const int px = col_cell[pixel % width];
        const int cy0 = std::max(0, py - radius), cy1 = std::min(grid - 1, py + radius);
        const int cx0 = std::max(0, px - radius), cx1 = std::min(grid - 1, px + radius);
        for (int cy = cy0; cy <= cy1; ++cy)
            for (int cx = cx0; cx <= cx1; ++cx) fn(cy, cx);
    };

    for (size_t i = 0; i < n; ++i) {
        size_t count = 0;
        window_cells(i, [&](int, int) { count += per_cell; });
        if (count == 0) throw std::runtime_error("empty association window");
        assoc.row_offsets[i + 1] = count;
    }
    for (size_t i = 0; i < n; ++i) assoc.row_offsets[i + 1] += assoc.row_offsets[i];

    assoc.center_index.resize(assoc.row_offsets[n]);
    assoc.weight.resize(assoc.row_offsets[n]);

    parallel_chunks(n, cfg.threads, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            size_t e = assoc.row_offsets[i];
            const double* q = query.row(i);
            window_cells(i, [&](int cy, int cx) {
                const int base = (cy * grid + cx) * per_cell;
                for (int m = 0; m < per_cell; ++m) {
                    const int j = base + m;
                    const double* p = centers.feature(j);
                    double d2 = 0.0;
                    for (int c = 0; c < centers.dim; ++c) {
                        const double d = q[c] - p[c];
                        d2 += d * d;
                    }
                    assoc.center_index[e] = j;
                    assoc.weight[e] = std::exp(-d2);
                    ++e;
                }
            });
        }
    });
    return assoc;
}

AssociationMatrix compute_associations(const FeatureMap& semantic, const FeatureMap& spectral,
                                       const FeatureMap& derivative, const CentroidSet& centers,
                                       const ClusterConfig& cfg) {
    return compute_associations(sum_feature_maps({&semantic, &spectral, &derivative}), centers,
                                cfg);
}

namespace {

// Column view of the CSR matrix; entries of each center come out in
// ascending pixel order because rows are scanned in order, fixing the
// reduction order for update_centers and keeping it bitwise stable.
struct ColumnView {
    std::vector<size_t> col_offsets;
    std::vector<size_t> pixel;
    std::vector<double> weight;
};

ColumnView transpose(const AssociationMatrix& assoc) {
    ColumnView view;
    view.col_offsets.assign(assoc.centers + 1, 0);
    for (int j : assoc.center_index) ++view.col_offsets[j + 1];
    for (int j = 0; j < assoc.centers; ++j) view.col_offsets[j + 1] += view.col_offsets[j];
    view.pixel.resize(assoc.center_index.size());
    view.weight.resize(assoc.center_index.size());
    std::vector<size_t> cursor(view.col_offsets.begin(), view.col_offsets.end() - 1);
    for (size_t i = 0; i < assoc.pixels; ++i)
        for (size_t e = assoc.row_offsets[i]; e < assoc.row_offsets[i + 1]; ++e) {
            const int j = assoc.center_index[e];
            view.pixel[cursor[j]] = i;
            view.weight[cursor[j]] = assoc.weight[e];
            ++cursor[j];
        }
    return view;
}

}  // namespace

CentroidSet update_centers(const AssociationMatrix& assoc, const FeatureMap& features,
                           const CentroidSet& previous, int threads) {
    if (features.count() != assoc.pixels || previous.count != assoc.centers ||
        previous.dim != features.dim)
        throw std::runtime_error("update_centers shape mismatch");
    const ColumnView view = transpose(assoc);
    CentroidSet next = previous;
    parallel_chunks(static_cast<size_t>(assoc.centers), threads, [&](size_t begin, size_t end) {
        for (size_t j = begin; j < end; ++j) {
            double col_sum = 0.0;
            for (size_t e = view.col_offsets[j]; e < view.col_offsets[j + 1]; ++e)
                col_sum += view.weight[e];
            if (col_sum <= 0.0) continue;  // keep previous feature
            double* dst = next.feature(static_cast<int>(j));
            std::fill(dst, dst + next.dim, 0.0);
            for (size_t e = view.col_offsets[j]; e < view.col_offsets[j + 1]; ++e) {
                const double w = view.weight[e] / col_sum;
                const double* src = features.row(view.pixel[e]);
                for (int c = 0; c < next.dim; ++c) dst[c] += w * src[c];
            }
        }
    });
    return next;
}

AssignmentMap assign_pixels(const AssociationMatrix& assoc, int height, int width) {
    if (static_cast<size_t>(height) * width != assoc.pixels)
        throw std::runtime_error("assignment shape mismatch");
    AssignmentMap map;
    map.height = height;
    map.width = width;
    map.center.resize(assoc.pixels);
    for (size_t i = 0; i < assoc.pixels; ++i) {
        if (assoc.row_offsets[i] == assoc.row_offsets[i + 1])
            throw std::runtime_error("pixel with empty association row");
        size_t best = assoc.row_offsets[i];
        for (size_t e = best + 1; e < assoc.row_offsets[i + 1]; ++e)
            if (assoc.weight[e] > assoc.weight[best]) best = e;
        // entries are stored in ascending center order, so the first maximum
        // realizes the smallest-index tie rule
        map.center[i] = assoc.center_index[best];
    }
    return map;
}

ClusterResult cluster(const FeatureMap& semantic, const FeatureMap& query,
                      const ClusterConfig& cfg) {
    if (semantic.count() != query.count() || semantic.dim != query.dim)
        throw std::runtime_error("semantic/query feature maps disagree");
    ClusterResult result;
    result.centers = init_centroids(semantic, cfg);
    for (int t = 0; t < cfg.iterations; ++t) {
        result.associations = compute_associations(query, result.centers, cfg);
        result.centers = update_centers(result.associations, semantic, result.centers,
                                        cfg.threads);
    }
    result.associations = compute_associations(query, result.centers, cfg);
    result.assignment = assign_pixels(result.associations, query.height, query.width);
    return result;
}

SupertokenSet aggregate_tokens(const AssociationMatrix& assoc, const AssignmentMap& assignment,
                               const FeatureMap& features, const CentroidSet& centers) {
    if (assignment.count() != assoc.pixels || features.count() != assoc.pixels ||
        centers.count != assoc.centers || centers.dim != features.dim)
        throw std::runtime_error("aggregate_tokens shape mismatch");
    SupertokenSet tokens;
    tokens.count = centers.count;
    tokens.dim = centers.dim;
    tokens.features = centers.features;  // start from p_j
    tokens.member_count.assign(tokens.count, 0);
    std::vector<double> weight_sum(tokens.count, 0.0);
    // ascending pixel order fixes the accumulation order per token
    for (size_t i = 0; i < assoc.pixels; ++i) {
        const int j = assignment.center[i];
        if (j < 0 || j >= tokens.count) throw std::runtime_error("assignment index out of range");
        const double a = assoc.at_dense(i, j);
        const double* f = features.row(i);
        double* s = tokens.feature(j);
        for (int c = 0; c < tokens.dim; ++c) s[c] += a * f[c];
        weight_sum[j] += a;
        ++tokens.member_count[j];
    }
    for (int j = 0; j < tokens.count; ++j) {
        const double denom = 1.0 + weight_sum[j];
        double* s = tokens.feature(j);
        for (int c = 0; c < tokens.dim; ++c) s[c] /= denom;
    }
    return tokens;
}

}  // namespace sst
