// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mimogen/tracer.hpp"

#include "mimogen/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>

namespace mimogen
{

namespace
{

constexpr double kPi = std::numbers::pi;
// Buildings are shrunk by this much for occlusion tests so that segments
// starting or ending on a face do not count as entering the solid.
constexpr double kOcclusionInset = 1e-6;
// Rectangle membership slack for bounce points, in metres.
constexpr double kFaceSlack = 1e-9;
// Lateral extent of the ground reflector around the scene's content.
constexpr double kGroundMargin = 1e6;

double friis(double length, double wavelength)
{
    const double a = wavelength / (4.0 * kPi * length);
    return a * a;
}

double db_to_linear(double db) { return std::pow(10.0, -db / 10.0); }

double azimuth_deg(const Vec3 &d)
{
    double az = std::atan2(d.y, d.x) * 180.0 / kPi;
    if (az <= -180.0)
        az = 180.0;
    return az;
}

double elevation_deg(const Vec3 &d)
{
    return std::acos(std::clamp(d.z / norm(d), -1.0, 1.0)) * 180.0 / kPi;
}

// Half-space c.p + c0 >= 0, with |c| = 1.
struct Halfspace
{
    Vec3 c;
    double c0 = 0.0;
};

constexpr double kBeamTol = 1e-7;
constexpr std::size_t kMaxPolygon = 24;

struct Polygon
{
    std::array<Vec3, kMaxPolygon> pts;
    std::size_t n = 0;
};

// Rays leaving `apex` through a convex polygon on a face, beyond the face plane.
struct Beam
{
    std::array<Halfspace, kMaxPolygon + 1> h;
    std::size_t n = 0;
};

double eval(const Halfspace &h, const Vec3 &p) { return dot(h.c, p) + h.c0; }

Polygon face_polygon(const Tracer::Face &f)
{
    Polygon poly;
    const double us[4] = {f.u_min, f.u_max, f.u_max, f.u_min};
    const double vs[4] = {f.v_min, f.v_min, f.v_max, f.v_max};
    for (int i = 0; i < 4; ++i)
    {
        Vec3 p;
        p[f.axis] = f.offset;
        p[f.u_axis] = us[i];
        p[f.v_axis] = vs[i];
        poly.pts[poly.n++] = p;
    }
    return poly;
}

// Sutherland-Hodgman against a slightly widened half-space.
Polygon clip(const Polygon &in, const Halfspace &h)
{
    // Clipping a convex polygon adds at most one vertex; when full, skip
    // the plane (the result stays conservative).
    if (in.n == 0 || in.n >= kMaxPolygon)
        return in;
    Polygon out;
    for (std::size_t i = 0; i < in.n; ++i)
    {
        const Vec3 &a = in.pts[i];
        const Vec3 &b = in.pts[(i + 1) % in.n];
        const double da = eval(h, a) + kBeamTol;
        const double db = eval(h, b) + kBeamTol;
        if (da >= 0.0)
            out.pts[out.n++] = a;
        if ((da >= 0.0) != (db >= 0.0))
            out.pts[out.n++] = a + (da / (da - db)) * (b - a);
    }
    return out;
}

Beam make_beam(const Vec3 &apex, const Tracer::Face &f, const Polygon &poly)
{
    Beam beam;
    Vec3 ea;
    ea[f.axis] = f.normal_sign;
    beam.h[beam.n++] = {ea, -f.normal_sign * f.offset};
    Vec3 centroid;
    for (std::size_t i = 0; i < poly.n; ++i)
        centroid = centroid + poly.pts[i];
    centroid = (1.0 / static_cast<double>(poly.n)) * centroid;
    for (std::size_t i = 0; i < poly.n; ++i)
    {
        const Vec3 &p = poly.pts[i];
        const Vec3 &q = poly.pts[(i + 1) % poly.n];
        Vec3 c = cross(p - apex, q - apex);
        const double len = norm(c);
        if (len < 1e-12)
            continue;
        c = (1.0 / len) * c;
        Halfspace h{c, -dot(c, apex)};
        if (eval(h, centroid) < 0.0)
            h = {-1.0 * h.c, -h.c0};
        beam.h[beam.n++] = h;
    }
    return beam;
}

bool point_in(const Beam &beam, const Vec3 &p)
{
    for (std::size_t i = 0; i < beam.n; ++i)
        if (eval(beam.h[i], p) < -kBeamTol)
            return false;
    return true;
}

// Conservative: true unless the box lies entirely outside one bounding plane.
bool box_may_intersect(const Beam &beam, const Vec3 &lo, const Vec3 &hi)
{
    for (std::size_t k = 0; k < beam.n; ++k)
    {
        const Halfspace &h = beam.h[k];
        double best = h.c0;
        for (int i = 0; i < 3; ++i)
            best += std::max(h.c[i] * lo[i], h.c[i] * hi[i]);
        if (best < -kBeamTol)
            return false;
    }
    return true;
}

bool path_less(const TracedPath &a, const TracedPath &b)
{
    if (a.record.power != b.record.power)
        return a.record.power > b.record.power;
    if (a.record.delay != b.record.delay)
        return a.record.delay < b.record.delay;
    return std::lexicographical_compare(a.vertices.begin(), a.vertices.end(), b.vertices.begin(), b.vertices.end(),
                                        [](const Vec3 &p, const Vec3 &q) {
                                            if (p.x != q.x)
                                                return p.x < q.x;
                                            if (p.y != q.y)
                                                return p.y < q.y;
                                            return p.z < q.z;
                                        });
}

} // namespace

Vec3 mirror_point(const Vec3 &p, const AxisPlane &plane) noexcept
{
    Vec3 out = p;
    out[plane.axis] = 2.0 * plane.offset - p[plane.axis];
    return out;
}

double path_power(double length, int n_reflections, double carrier_freq, std::span<const double> reflection_loss_db)
{
    if (!(length > 0.0))
        throw DomainError("path length must be positive (got " + std::to_string(length) + ")");
    if (!(carrier_freq > 0.0))
        throw DomainError("carrier frequency must be positive");
    if (n_reflections < 0 || static_cast<std::size_t>(n_reflections) != reflection_loss_db.size())
        throw DomainError("expected one reflection loss per bounce (" + std::to_string(n_reflections) + " bounces, " +
                          std::to_string(reflection_loss_db.size()) + " losses)");
    double p = friis(length, kSpeedOfLight / carrier_freq);
    for (double db : reflection_loss_db)
        p *= db_to_linear(db);
    return p;
}

double path_phase(double delay, int n_reflections, double carrier_freq)
{
    double phase = std::fmod(-2.0 * kPi * carrier_freq * delay + kPi * n_reflections, 2.0 * kPi);
    if (phase < 0.0)
        phase += 2.0 * kPi;
    if (phase >= 2.0 * kPi)
        phase = 0.0;
    return phase;
}

double TracedPath::length() const noexcept
{
    double total = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i)
        total += distance(vertices[i - 1], vertices[i]);
    return total;
}

Tracer::Tracer(const Scene &scene) : scene_(scene)
{
    Vec3 lo{scene.ground_z, scene.ground_z, scene.ground_z};
    Vec3 hi = lo;
    auto grow = [&](const Vec3 &p) {
        for (int a = 0; a < 3; ++a)
        {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    };
    for (const auto &b : scene.buildings)
    {
        grow(b.min_corner);
        grow(b.max_corner);
    }
    for (const auto &bs : scene.base_stations)
        grow(bs.position);

    best_loss_linear_ = db_to_linear(scene.reflection_loss_db(scene.ground_material));
    faces_.push_back({2, scene.ground_z, 1.0, 0, 1, lo.x - kGroundMargin, hi.x + kGroundMargin,
                      lo.y - kGroundMargin, hi.y + kGroundMargin, best_loss_linear_});

    for (const auto &b : scene.buildings)
    {
        const double loss = db_to_linear(scene.reflection_loss_db(b.material));
        best_loss_linear_ = std::max(best_loss_linear_, loss);
        const Vec3 &mn = b.min_corner;
        const Vec3 &mx = b.max_corner;
        faces_.push_back({0, mn.x, -1.0, 1, 2, mn.y, mx.y, mn.z, mx.z, loss});
        faces_.push_back({0, mx.x, 1.0, 1, 2, mn.y, mx.y, mn.z, mx.z, loss});
        faces_.push_back({1, mn.y, -1.0, 0, 2, mn.x, mx.x, mn.z, mx.z, loss});
        faces_.push_back({1, mx.y, 1.0, 0, 2, mn.x, mx.x, mn.z, mx.z, loss});
        faces_.push_back({2, mx.z, 1.0, 0, 1, mn.x, mx.x, mn.y, mx.y, loss});
    }
}

bool Tracer::segment_clear(const Vec3 &a, const Vec3 &b) const noexcept
{
    const Vec3 d = b - a;
    for (const auto &bld : scene_.buildings)
    {
        double t0 = 0.0;
        double t1 = 1.0;
        bool hit = true;
        for (int ax = 0; ax < 3 && hit; ++ax)
        {
            const double lo = bld.min_corner[ax] + kOcclusionInset;
            const double hi = bld.max_corner[ax] - kOcclusionInset;
            if (d[ax] == 0.0)
            {
                if (a[ax] <= lo || a[ax] >= hi)
                    hit = false;
                continue;
            }
            double ta = (lo - a[ax]) / d[ax];
            double tb = (hi - a[ax]) / d[ax];
            if (ta > tb)
                std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 >= t1)
                hit = false;
        }
        if (hit)
            return false;
    }
    return true;
}

std::vector<TracedPath> Tracer::trace_points(const Vec3 &tx, const Vec3 &rx, const TraceOptions &opts) const
{
    if (opts.max_reflections < 0)
        throw DomainError("max_reflections must be >= 0");
    if (opts.max_paths == 0)
        throw DomainError("max_paths must be >= 1");

    const double wavelength = kSpeedOfLight / scene_.carrier_freq;
    std::vector<TracedPath> found;
    // Powers of the strongest max_paths paths found so far (min at top).
    std::priority_queue<double, std::vector<double>, std::greater<>> strongest;

    auto accept = [&](std::vector<Vec3> vertices, std::vector<std::uint32_t> faces, double loss) {
        TracedPath tp;
        tp.vertices = std::move(vertices);
        tp.faces = std::move(faces);
        const double len = tp.length();
        auto &r = tp.record;
        r.n_reflections = static_cast<std::uint16_t>(tp.faces.size());
        r.delay = len / kSpeedOfLight;
        r.power = friis(len, wavelength) * loss;
        r.phase = path_phase(r.delay, r.n_reflections, scene_.carrier_freq);
        const Vec3 dep = tp.vertices[1] - tp.vertices[0];
        const Vec3 arr = tp.vertices[tp.vertices.size() - 2] - tp.vertices.back();
        r.aod_az = azimuth_deg(dep);
        r.aod_el = elevation_deg(dep);
        r.aoa_az = azimuth_deg(arr);
        r.aoa_el = elevation_deg(arr);
        if (!(r.power > 0.0))
            return;
        strongest.push(r.power);
        if (strongest.size() > opts.max_paths)
            strongest.pop();
        found.push_back(std::move(tp));
    };

    auto prunable = [&](double bound) {
        return strongest.size() == opts.max_paths && bound * (1.0 + 1e-9) < strongest.top();
    };

    if (distance(tx, rx) > 0.0 && segment_clear(tx, rx))
        accept({tx, rx}, {}, 1.0);

    std::vector<std::uint32_t> seq;
    std::vector<Vec3> images; // images[k] = source mirrored across the first k faces
    images.push_back(tx);

    // Given a complete face sequence, recover the bounce points by walking
    // back from the receiver and check every leg for blockage.
    auto solve = [&](double loss) {
        const std::size_t n = seq.size();
        std::vector<Vec3> pts(n + 2);
        pts[0] = tx;
        pts[n + 1] = rx;
        Vec3 target = rx;
        for (std::size_t i = n; i >= 1; --i)
        {
            const Face &f = faces_[seq[i - 1]];
            const Vec3 &img = images[i];
            const double denom = target[f.axis] - img[f.axis];
            if (denom == 0.0)
                return;
            const double t = (f.offset - img[f.axis]) / denom;
            if (!(t > 0.0 && t < 1.0))
                return;
            Vec3 p = img + t * (target - img);
            p[f.axis] = f.offset;
            if (p[f.u_axis] < f.u_min - kFaceSlack || p[f.u_axis] > f.u_max + kFaceSlack ||
                p[f.v_axis] < f.v_min - kFaceSlack || p[f.v_axis] > f.v_max + kFaceSlack)
                return;
            pts[i] = p;
            target = p;
        }
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        {
            if (!(distance(pts[i], pts[i + 1]) > 0.0))
                return;
            if (!segment_clear(pts[i], pts[i + 1]))
                return;
        }
        accept(std::move(pts), seq, loss);
    };

    // Faces the receiver can be reached from; only these may end a path.
    std::vector<char> rx_front(faces_.size());
    for (std::size_t gi = 0; gi < faces_.size(); ++gi)
        rx_front[gi] = faces_[gi].normal_sign * (rx[faces_[gi].axis] - faces_[gi].offset) > 0.0;

    std::function<void(int, double, const Beam *)> descend = [&](int remaining, double loss,
                                                                      const Beam *fr) {
        const Vec3 src = images.back();
        auto visit = [&](std::uint32_t gi) {
            if (!seq.empty() && seq.back() == gi)
                return;
            const Face &g = faces_[gi];
            if (!(g.normal_sign * (src[g.axis] - g.offset) > 0.0))
                return;
            const double next_loss = loss * g.loss_linear;
            const Vec3 img = mirror_point(src, {g.axis, g.offset});
            if (remaining == 1)
            {
                if (!rx_front[gi])
                    return;
                // Last bounce: the unfolded leg img -> rx must cross g inside
                // the beam left by the previous faces.
                const double t = (g.offset - img[g.axis]) / (rx[g.axis] - img[g.axis]);
                Vec3 p = img + t * (rx - img);
                p[g.axis] = g.offset;
                if (p[g.u_axis] < g.u_min - kFaceSlack || p[g.u_axis] > g.u_max + kFaceSlack ||
                    p[g.v_axis] < g.v_min - kFaceSlack || p[g.v_axis] > g.v_max + kFaceSlack)
                    return;
                if (fr != nullptr && !point_in(*fr, p))
                    return;
                if (prunable(friis(distance(img, rx), wavelength) * next_loss))
                    return;
                seq.push_back(gi);
                images.push_back(img);
                solve(next_loss);
                images.pop_back();
                seq.pop_back();
                return;
            }
            const double d = distance(img, rx);
            if (d > 0.0 && prunable(friis(d, wavelength) * next_loss * std::pow(best_loss_linear_, remaining - 1)))
                return;
            Polygon poly = face_polygon(g);
            if (fr != nullptr)
            {
                for (std::size_t k = 0; k < fr->n && poly.n >= 3; ++k)
                    poly = clip(poly, fr->h[k]);
                if (poly.n < 3)
                    return;
            }
            const Beam next = make_beam(img, g, poly);
            seq.push_back(gi);
            images.push_back(img);
            descend(remaining - 1, next_loss, &next);
            images.pop_back();
            seq.pop_back();
        };
        // Ground first, then per building only the faces turned towards src.
        visit(0);
        for (std::size_t b = 0; b < scene_.buildings.size(); ++b)
        {
            const Building &bld = scene_.buildings[b];
            if (fr != nullptr && !box_may_intersect(*fr, bld.min_corner, bld.max_corner))
                continue;
            const auto base = static_cast<std::uint32_t>(1 + 5 * b);
            for (int ax = 0; ax < 2; ++ax)
            {
                if (src[ax] < bld.min_corner[ax])
                    visit(base + 2 * ax);
                else if (src[ax] > bld.max_corner[ax])
                    visit(base + 2 * ax + 1);
            }
            if (src.z > bld.max_corner.z)
                visit(base + 4);
        }
    };

    // Lower orders first so the power threshold tightens early.
    for (int order = 1; order <= opts.max_reflections; ++order)
        descend(order, 1.0, nullptr);

    std::sort(found.begin(), found.end(), path_less);
    if (found.size() > opts.max_paths)
        found.resize(opts.max_paths);
    return found;
}

PathList Tracer::trace(std::uint32_t bs_id, const Vec3 &user_position, const TraceOptions &opts) const
{
    const BaseStation &bs = scene_.base_station(bs_id);
    PathList out;
    out.bs_id = bs_id;
    out.user_position = user_position;
    for (auto &tp : trace_points(bs.position, user_position, opts))
        out.paths.push_back(tp.record);
    return out;
}

PathList trace_paths(const Scene &scene, std::uint32_t bs_id, const Vec3 &user_position, int max_reflections,
                     std::size_t max_paths)
{
    return Tracer(scene).trace(bs_id, user_position, {max_reflections, max_paths});
}

} // namespace mimogen
