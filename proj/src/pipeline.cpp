#include "rotdev/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "rotdev/config.hpp"
#include "rotdev/errors.hpp"
#include "rotdev/grid_cache.hpp"
#include "rotdev/invariants.hpp"
#include "rotdev/parallel.hpp"
#include "rotdev/pseudofoliation.hpp"
#include "rotdev/rotation_set.hpp"
#include "rotdev/skew_product.hpp"
#include "rotdev/stable_sets.hpp"
#include "rotdev/svg.hpp"

namespace fs = std::filesystem;

namespace rotdev {

std::string to_string(Subcommand s) {
    switch (s) {
    case Subcommand::rotset: return "rotset";
    case Subcommand::deviation: return "deviation";
    case Subcommand::stableset: return "stableset";
    case Subcommand::foliation: return "foliation";
    case Subcommand::verify: return "verify";
    case Subcommand::render: return "render";
    }
    return "unknown";
}

std::optional<Subcommand> parse_subcommand(const std::string& s) {
    for (Subcommand c : {Subcommand::rotset, Subcommand::deviation, Subcommand::stableset, Subcommand::foliation,
                         Subcommand::verify, Subcommand::render})
        if (to_string(c) == s) return c;
    return std::nullopt;
}

namespace {

Json vec(Vec2 v) { return Json::array({v.x, v.y}); }

std::string hex64(std::uint64_t x) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw StageDependencyError("missing artifact " + p.filename().string() + "; run its stage first");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json check_json(const CheckResult& c) {
    Json j;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["value"] = c.value;
    j["bound"] = c.bound;
    j["detail"] = c.detail;
    return j;
}

Json axiom_json(const AxiomResult& a) {
    Json j;
    j["passed"] = a.passed;
    j["value"] = a.value;
    j["bound"] = a.bound;
    j["detail"] = a.detail;
    return j;
}

Json window_json(const Window& w) {
    Json j;
    j["center"] = vec(w.center);
    j["half_width"] = w.half_width;
    j["resolution"] = w.resolution;
    j["h"] = w.h();
    return j;
}

Window window_from_json(const Json& j) {
    Window w;
    w.center = {j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()};
    w.half_width = j.at("half_width").get<double>();
    w.resolution = j.at("resolution").get<int>();
    return w;
}

// Holds <out>/.lock for the lifetime of a run.
class DirLock {
public:
    explicit DirLock(const fs::path& dir) : path_(dir / ".lock") {
        file_ = std::fopen(path_.string().c_str(), "wx");
        if (!file_) throw ConfigError("output directory " + dir.string() + " is locked by another run (" +
                                      path_.string() + ")");
    }
    ~DirLock() {
        std::fclose(file_);
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    fs::path path_;
    std::FILE* file_ = nullptr;
};

class Pipeline {
public:
    Pipeline(const RunOptions& opts, RunConfig cfg, std::ostream& log)
        : opts_(opts), cfg_(std::move(cfg)), log_(log), cache_(opts.out_dir / "cache", cfg_.cache),
          map_(cfg_.map.instantiate().with_horizon_cap(cfg_.horizon_cap)) {}

    void execute();

private:
    void write(const std::string& name, const std::string& content);
    void stage_rotset();
    void stage_deviation();
    void stage_stableset();
    void stage_foliation();
    void stage_verify();
    void render();
    void write_manifest();

    FiberMinimumField cached_field(const CentralizedSkewProduct& sp, Vec2 t, const Window& window,
                                   Sidedness sidedness);
    std::string field_params(Vec2 t, const Window& window, Sidedness sidedness) const;

    const RunOptions& opts_;
    RunConfig cfg_;
    std::ostream& log_;
    GridCache cache_;
    LiftedTorusMap map_;
    std::uint64_t map_hash_ = 0;

    std::optional<RotationSetEstimate> est_;
    std::optional<DeviationProfile> profile_;
    Vec2 rho_tilde_;
    std::optional<CentralizedSkewProduct> sp_;
    std::optional<Window> window_;
    std::optional<FiberMinimumField> field_;
    std::optional<FiniteHorizonStableSet> set_;
    std::optional<LevelFunctionChart> chart_;
    std::optional<FoliationCertificate> cert_;
    bool foliation_skipped_ = false;

    Json stages_ = Json::object();
    Json timings_ = Json::object();
    std::map<std::string, std::string> artifacts_;
};

void Pipeline::write(const std::string& name, const std::string& content) {
    const fs::path p = opts_.out_dir / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    artifacts_[name] = content;
}

void Pipeline::stage_rotset() {
    RotationSetOptions ro;
    ro.point_tol = cfg_.point_tol;
    ro.line_tol = cfg_.line_tol;
    ro.point_direction = cfg_.point_direction;
    est_ = estimate_rotation_set(map_, cfg_.rot_grid_res, cfg_.rot_horizons, ro);

    Json j;
    Json hull = Json::array();
    for (const Vec2& p : est_->hull) hull.push_back(vec(p));
    j["hull"] = hull;
    j["centroid"] = vec(est_->centroid());
    j["horizon"] = est_->horizon;
    j["grid_res"] = est_->grid_res;
    j["diameter"] = est_->diameter;
    j["min_width"] = est_->min_width;
    Json trend = Json::array();
    for (const auto& t : est_->trend) trend.push_back({{"horizon", t.horizon}, {"diameter", t.diameter}});
    j["trend"] = trend;
    j["classification"] = to_string(est_->classification);
    if (est_->carrier)
        j["carrier"] = {{"v", vec(est_->carrier->v)}, {"alpha", est_->carrier->alpha}};
    else
        j["carrier"] = nullptr;
    write("hull.json", dump_json(j));
    stages_["rotset"] = j;
    long work = 0;
    for (long n : cfg_.rot_horizons) work = std::max(work, n);
    timings_["rotset"] = static_cast<double>(cfg_.rot_grid_res) * cfg_.rot_grid_res * static_cast<double>(work);
}

void Pipeline::stage_deviation() {
    Vec2 v;
    double alpha = 0.0;
    const Vec2 c = est_->centroid();
    if (cfg_.v_override) {
        v = *cfg_.v_override;
        alpha = cfg_.alpha_override.value_or(dot(c, v));
    } else if (est_->carrier) {
        v = est_->carrier->v;
        alpha = est_->carrier->alpha;
    } else {
        throw StageDependencyError("deviation stage needs a carrier line; rotation set is classified " +
                                   to_string(est_->classification) + " and no [deviation] v is given");
    }
    rho_tilde_ = c + (alpha - dot(c, v)) * v;

    const long N = cfg_.dev_horizon;
    char params[256];
    std::snprintf(params, sizeof params, "v=%.17g,%.17g|alpha=%.17g|grid=%d|N=%ld", v.x, v.y, alpha,
                  cfg_.dev_grid_res, N);
    const auto key = GridCache::key(map_hash_, "deviation", params);
    const auto width = static_cast<std::uint32_t>(2 * N + 1);
    if (auto blob = cache_.load(key); blob && blob->width == width && blob->height == 2) {
        auto all = blob->as_f64();
        std::vector<double> plus(all.begin(), all.begin() + width), minus(all.begin() + width, all.end());
        profile_ = profile_from_values(v, alpha, cfg_.dev_grid_res, N, std::move(plus), std::move(minus),
                                       cfg_.thresholds);
    } else {
        profile_ = deviation_profile(map_, v, alpha, cfg_.dev_grid_res, N, cfg_.thresholds);
        std::vector<double> all = profile_->d_plus;
        all.insert(all.end(), profile_->d_minus.begin(), profile_->d_minus.end());
        cache_.store(key, GridBlob::from_f64(all, width, 2));
    }
    const double slack = default_slack(map_, N, cfg_.slack_factor);
    const SymmetryGap gap = symmetry_gap(*profile_, slack);

    // M(|n|) alongside D(n).
    std::vector<double> running(static_cast<std::size_t>(N) + 1, 0.0);
    double m = -std::numeric_limits<double>::infinity();
    for (long n = 0; n <= N; ++n) {
        m = std::max({m, profile_->at(n), profile_->at(-n)});
        running[static_cast<std::size_t>(n)] = m;
    }
    std::string csv = "n,D,M\n";
    for (long n = -N; n <= N; ++n)
        csv += std::to_string(n) + "," + format_double(profile_->at(n)) + "," +
               format_double(running[static_cast<std::size_t>(std::labs(n))]) + "\n";
    write("deviations.csv", csv);

    Json j;
    j["v"] = vec(v);
    j["alpha"] = alpha;
    j["rho_tilde"] = vec(rho_tilde_);
    j["horizon"] = N;
    j["grid_res"] = cfg_.dev_grid_res;
    Json cps = Json::array();
    for (const auto& cp : profile_->checkpoints) cps.push_back({{"horizon", cp.horizon}, {"M", cp.running_max}});
    j["checkpoints"] = cps;
    j["running_max"] = profile_->running_max;
    j["growth"] = profile_->growth;
    j["verdict"] = to_string(profile_->verdict);
    j["symmetry_gap"] = {{"gap_plus", gap.gap_plus}, {"gap_minus", gap.gap_minus}, {"slack", gap.slack},
                         {"bound", gap.bound}};
    write("deviation.json", dump_json(j));
    stages_["deviation"] = j;
    timings_["deviation"] = static_cast<double>(cfg_.dev_grid_res) * cfg_.dev_grid_res * 2.0 * static_cast<double>(N);
}

std::string Pipeline::field_params(Vec2 t, const Window& window, Sidedness sidedness) const {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "rho=%.17g,%.17g|v=%.17g,%.17g|t=%.17g,%.17g|N=%ld|c=%.17g,%.17g|W=%.17g|res=%d|%s", rho_tilde_.x,
                  rho_tilde_.y, profile_->v.x, profile_->v.y, t.x, t.y, cfg_.ss_horizon, window.center.x,
                  window.center.y, window.half_width, window.resolution, to_string(sidedness).c_str());
    return buf;
}

FiberMinimumField Pipeline::cached_field(const CentralizedSkewProduct& sp, Vec2 t, const Window& window,
                                         Sidedness sidedness) {
    const auto key = GridCache::key(map_hash_, "fiber_min", field_params(t, window, sidedness));
    const auto res = static_cast<std::uint32_t>(window.resolution);
    if (auto blob = cache_.load(key); blob && blob->width == res && blob->height == res) {
        FiberMinimumField f;
        f.window = window;
        f.v = profile_->v;
        f.t = t;
        f.horizon = cfg_.ss_horizon;
        f.sidedness = sidedness;
        f.q = blob->as_f64();
        return f;
    }
    FiberMinimumField f = fiber_minimum_field(sp, t, profile_->v, cfg_.ss_horizon, window, sidedness);
    cache_.store(key, GridBlob::from_f64(f.q, res, res));
    return f;
}

void Pipeline::stage_stableset() {
    sp_ = CentralizedSkewProduct::build(map_, rho_tilde_);
    const Vec2 v = profile_->v;
    double W = 8.0;
    if (cfg_.half_width) {
        W = *cfg_.half_width;
    } else {
        // Smallest 8 * 2^k covering 2M, so integer shifts stay cell aligned.
        while (W < 2.0 * profile_->running_max && W < 1e6) W *= 2.0;
    }
    window_ = Window{cfg_.center, W, cfg_.resolution};
    window_->validate();

    field_ = cached_field(*sp_, cfg_.t, *window_, cfg_.sidedness);
    set_ = stable_set(*field_, cfg_.r, cfg_.cap_fraction);
    write("stableset.pgm", to_pgm(set_->component));
    write("qualifying.pgm", to_pgm(set_->qualifying));

    std::vector<Vec2> ts;
    for (int k = 0; k < cfg_.t_samples; ++k)
        ts.push_back(wrap(Vec2{(k + 0.5) / cfg_.t_samples, static_cast<double>(k) * golden_mean()}));
    const NonemptinessReport ne = nonemptiness_check(*sp_, cfg_.r, v, cfg_.ss_horizon, *window_, ts);
    const StripEscapeReport se = strip_escape_check(set_->component, v, *window_, cfg_.s_values, profile_->verdict);

    Json j;
    j["r"] = cfg_.r;
    j["v"] = vec(v);
    j["t"] = vec(cfg_.t);
    j["rho_tilde"] = vec(rho_tilde_);
    j["horizon"] = cfg_.ss_horizon;
    j["sidedness"] = to_string(cfg_.sidedness);
    j["window"] = window_json(*window_);
    j["cap_fraction"] = cfg_.cap_fraction;
    j["component_cells"] = set_->component.count();
    j["qualifying_cells"] = set_->qualifying.count();
    j["touched_far_cap"] = set_->touched_far_cap;
    j["far_cap_components"] = set_->far_cap_components;
    j["interior_area"] = interior_area(set_->component, *window_);
    j["self_test_residual"] = sp_->self_test_residual();
    Json entries = Json::array();
    for (const auto& e : ne.entries)
        entries.push_back({{"t", vec(e.t)}, {"nonempty", e.nonempty}, {"component_cells", e.component_cells},
                           {"touched_far_cap", e.touched_far_cap}});
    j["nonemptiness"] = {{"all_nonempty", ne.all_nonempty},
                         {"retry_half_width", ne.retry_half_width ? Json(*ne.retry_half_width) : Json(nullptr)},
                         {"entries", entries}};
    Json esc = Json::array();
    for (const auto& e : se.entries)
        esc.push_back({{"s", e.s}, {"escaped", e.escaped}, {"window_limited", e.window_limited}});
    j["strip_escape"] = {{"applicable", se.applicable}, {"entries", esc}};
    if (cfg_.r_min <= -2.0 * W) {
        const double cov = coverage_fraction(*sp_, v, cfg_.ss_horizon, *window_, cfg_.r_min, cfg_.t);
        j["coverage"] = {{"r_min", cfg_.r_min}, {"fraction", cov}};
    } else {
        j["coverage"] = nullptr;
    }
    write("stableset.json", dump_json(j));
    stages_["stableset"] = j;
    const double sides = cfg_.sidedness == Sidedness::two_sided ? 2.0 : 1.0;
    timings_["stableset"] = static_cast<double>(window_->cells()) * sides * static_cast<double>(cfg_.ss_horizon);
}

void Pipeline::stage_foliation() {
    if (profile_->verdict != Verdict::bounded && !opts_.force)
        throw StageDependencyError("foliation needs a bounded deviation verdict (got " +
                                   to_string(profile_->verdict) + "); pass --force to override");
    const double m_bound = profile_->running_max;
    const Vec2 t0{};
    // The chart lives on the fibre over t = 0.
    const FiberMinimumField field = (cfg_.t == t0 && cfg_.sidedness == Sidedness::two_sided)
                                        ? *field_
                                        : cached_field(*sp_, t0, *window_, Sidedness::two_sided);
    LevelFunctionOptions lo;
    lo.eps_r = cfg_.eps_r;
    const double eps = lo.eps_r > 0.0 ? lo.eps_r : 0.5 * window_->h();

    char extra[96];
    std::snprintf(extra, sizeof extra, "|M=%.17g|eps=%.17g", m_bound, eps);
    const std::string params = field_params(t0, *window_, Sidedness::two_sided) + extra;
    const auto kH = GridCache::key(map_hash_, "chart_H", params);
    const auto kS = GridCache::key(map_hash_, "chart_status", params);
    const auto kR = GridCache::key(map_hash_, "chart_levels", params);
    const auto res = static_cast<std::uint32_t>(window_->resolution);
    auto bH = cache_.load(kH);
    auto bS = cache_.load(kS);
    auto bR = cache_.load(kR);
    if (bH && bS && bR && bH->width == res && bS->width == res && bR->width > 0) {
        LevelFunctionChart c;
        c.window = *window_;
        c.v = profile_->v;
        c.alpha = dot(sp_->rho_tilde(), c.v);
        c.t = t0;
        c.horizon = cfg_.ss_horizon;
        c.m_bound = m_bound;
        c.eps_r = eps;
        c.r_samples = bR->as_f64();
        c.r_lo = c.r_samples.front();
        c.r_hi = c.r_samples.back();
        c.H = bH->as_f64();
        const auto st = bS->as_u8();
        c.status.resize(st.size());
        for (std::size_t k = 0; k < st.size(); ++k) c.status[k] = static_cast<CellStatus>(st[k]);
        chart_ = std::move(c);
    } else {
        chart_ = level_function(*sp_, field, m_bound, lo);
        std::vector<std::uint8_t> st(chart_->status.size());
        for (std::size_t k = 0; k < st.size(); ++k) st[k] = static_cast<std::uint8_t>(chart_->status[k]);
        cache_.store(kH, GridBlob::from_f64(chart_->H, res, res));
        cache_.store(kS, GridBlob::from_u8(st, res, res));
        cache_.store(kR, GridBlob::from_f64(chart_->r_samples, static_cast<std::uint32_t>(chart_->r_samples.size()), 1));
    }

    std::vector<double> levels = cfg_.levels;
    if (levels.empty())
        for (int k = 1; k <= cfg_.level_count; ++k)
            levels.push_back(chart_->r_lo + (chart_->r_hi - chart_->r_lo) * k / (cfg_.level_count + 1));
    const auto leaves = extract_leaves(*chart_, levels);
    cert_ = certify(*chart_, leaves, map_, sp_->rho_tilde(), cfg_.n_checks);

    std::string raw(chart_->H.size() * sizeof(float), '\0');
    for (std::size_t k = 0; k < chart_->H.size(); ++k) {
        const float f = static_cast<float>(chart_->H[k]);
        std::uint32_t bits;
        std::memcpy(&bits, &f, sizeof bits);
        for (int b = 0; b < 4; ++b) raw[4 * k + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    }
    write("chart.f32", raw);

    std::string csv = "level,polyline,index,x,y\n";
    Json leaf_summary = Json::array();
    for (const PseudoLeaf& leaf : leaves) {
        for (std::size_t p = 0; p < leaf.polylines.size(); ++p)
            for (std::size_t i = 0; i < leaf.polylines[p].size(); ++i)
                csv += format_double(leaf.level) + "," + std::to_string(p) + "," + std::to_string(i) + "," +
                       format_double(leaf.polylines[p][i].x) + "," + format_double(leaf.polylines[p][i].y) + "\n";
        leaf_summary.push_back({{"level", leaf.level},
                                {"polylines", leaf.polylines.size()},
                                {"points", leaf.points()},
                                {"width", leaf.width}});
    }
    write("leaves.csv", csv);

    std::size_t counts[3] = {0, 0, 0};
    for (CellStatus s : chart_->status) ++counts[static_cast<int>(s)];
    Json j;
    j["window"] = window_json(*window_);
    j["v"] = vec(chart_->v);
    j["alpha"] = chart_->alpha;
    j["m_bound"] = m_bound;
    j["eps_r"] = chart_->eps_r;
    j["r_lo"] = chart_->r_lo;
    j["r_hi"] = chart_->r_hi;
    j["levels_evaluated"] = chart_->r_samples.size();
    j["resolved_fraction"] = chart_->resolved_fraction();
    j["status_counts"] = {{"resolved", counts[0]}, {"saturated_low", counts[1]}, {"saturated_high", counts[2]}};
    j["chart_file"] = {{"name", "chart.f32"}, {"dtype", "float32_le"}, {"layout", "row-major, first row j = 0 (bottom)"},
                       {"width", window_->resolution}, {"height", window_->resolution}};
    j["leaves"] = leaf_summary;
    Json cert;
    cert["separation"] = axiom_json(cert_->separation);
    cert["empty_interior"] = axiom_json(cert_->empty_interior);
    cert["disjointness"] = axiom_json(cert_->disjointness);
    cert["equivariance"] = axiom_json(cert_->equivariance);
    cert["strip_confinement"] = axiom_json(cert_->strip_confinement);
    cert["global_width"] = cert_->global_width;
    cert["equivariance_within_bound"] = cert_->equivariance_within_bound;
    cert["equivariance_samples"] = cert_->equivariance_samples;
    cert["slope"] = {{"rational", cert_->slope.rational}, {"p", cert_->slope.p}, {"q", cert_->slope.q}};
    cert["all_passed"] = cert_->all_passed();
    j["certificate"] = cert;
    write("chart.json", dump_json(j));
    stages_["foliation"] = j;
    timings_["foliation"] = static_cast<double>(chart_->r_samples.size()) * static_cast<double>(window_->cells());
}

void Pipeline::stage_verify() {
    std::vector<CheckResult> checks;
    auto guarded = [&](const std::string& name, auto&& fn) {
        try {
            checks.push_back(fn());
        } catch (const PreconditionError& e) {
            CheckResult c = make_check(name, 0.0, 0.0, std::string("not applicable: ") + e.what());
            checks.push_back(c);
        }
    };
    const long n_path = std::min<long>(1000, map_.horizon_cap());
    checks.push_back(check_integer_equivariance(map_));
    checks.push_back(check_cocycle_law(map_));
    checks.push_back(check_inversion_round_trip(map_));
    checks.push_back(check_conjugation(map_));
    checks.push_back(check_self_test(*sp_));
    checks.push_back(check_path_equivalence(*sp_, 16, n_path, 1e-10, true));
    checks.push_back(check_displacement_identity(*sp_, 16, n_path));

    checks.push_back(check_sandwich(*profile_, default_slack(map_, profile_->horizon, cfg_.slack_factor)));
    checks.push_back(check_horizon_monotone(*profile_));
    checks.push_back(check_lift_independence(map_, profile_->v, profile_->alpha, 32,
                                             std::min<long>(1000, profile_->horizon)));

    const Vec2 v = profile_->v;
    const long N = cfg_.ss_horizon;
    const FiberMinimumField two = cfg_.sidedness == Sidedness::two_sided
                                      ? *field_
                                      : cached_field(*sp_, cfg_.t, *window_, Sidedness::two_sided);
    checks.push_back(check_r_monotone(two, cfg_.r));
    checks.push_back(check_horizon_shrinkage(*sp_, cfg_.t, cfg_.r, v, N, *window_));
    checks.push_back(check_forward_contains(*sp_, cfg_.t, cfg_.r, v, N, *window_));
    for (auto which : {EquivarianceProperty::iii, EquivarianceProperty::iv})
        guarded("equivariance_" + to_string(which), [&] {
            return check_translation_equivariance(*sp_, cfg_.t, cfg_.r, v, N, *window_, which);
        });

    if (profile_->verdict == Verdict::bounded) {
        checks.push_back(check_half_plane_bounds(stable_set(two, cfg_.r, cfg_.cap_fraction), profile_->running_max));
        const auto& ne = stages_["stableset"]["nonemptiness"];
        checks.push_back(make_check("nonempty_all_t", ne["all_nonempty"].get<bool>() ? 0.0 : 1.0, 0.0,
                                    "fibres with an empty infinity component"));
        guarded("coverage", [&] {
            const double cov = coverage_fraction(*sp_, v, N, *window_, cfg_.r_min, cfg_.t);
            return make_check("coverage", 1.0 - cov, 0.0, "1 - covered fraction at r_min");
        });
    }

    if (cert_) {
        auto axiom = [&](const std::string& name, const AxiomResult& a) {
            CheckResult c;
            c.name = name;
            c.passed = a.passed;
            c.value = a.value;
            c.bound = a.bound;
            c.detail = a.detail;
            checks.push_back(c);
        };
        axiom("foliation_separation", cert_->separation);
        axiom("foliation_empty_interior", cert_->empty_interior);
        axiom("foliation_disjointness", cert_->disjointness);
        axiom("foliation_equivariance", cert_->equivariance);
        axiom("foliation_strip_confinement", cert_->strip_confinement);
        checks.push_back(check_chart_integer_translation(*chart_));
    }

    Json arr = Json::array();
    std::size_t failed = 0;
    for (const auto& c : checks) {
        arr.push_back(check_json(c));
        failed += !c.passed;
        if (!c.passed) log_ << "check failed: " << c.name << " value=" << format_double(c.value)
                            << " bound=" << format_double(c.bound) << " " << c.detail << "\n";
    }
    Json j;
    j["config"] = cfg_.name;
    j["foliation_skipped"] = foliation_skipped_;
    j["checks"] = arr;
    j["passed"] = checks.size() - failed;
    j["failed"] = failed;
    j["all_passed"] = failed == 0;
    write("verify.json", dump_json(j));
    stages_["verify"] = {{"checks", checks.size()}, {"failed", failed}, {"all_passed", failed == 0}};
}

// Tiny readers for the artifacts render consumes.
BoolGrid read_pgm(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    in.get();
    if (magic != "P5" || w <= 0 || h <= 0) throw Error("malformed PGM artifact");
    BoolGrid g(w, h);
    std::string data(static_cast<std::size_t>(w) * h, '\0');
    in.read(data.data(), static_cast<std::streamsize>(data.size()));
    // First stored row is the top of the window.
    for (int r = 0; r < h; ++r)
        for (int i = 0; i < w; ++i) g.set(i, h - 1 - r, data[static_cast<std::size_t>(r) * w + i] != 0);
    return g;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(cell);
        rows.push_back(cols);
    }
    return rows;
}

void Pipeline::render() {
    for (const std::string& name : cfg_.render_artifacts)
        if (name != "hull" && name != "deviation" && name != "mask" && name != "leaves")
            throw UnknownArtifact("unknown artifact '" + name + "' (known: hull, deviation, mask, leaves)");
    const fs::path& d = opts_.out_dir;
    for (const std::string& name : cfg_.render_artifacts) {
        if (name == "hull") {
            const Json j = Json::parse(read_file(d / "hull.json"));
            std::vector<Vec2> hull;
            for (const auto& p : j.at("hull")) hull.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            std::optional<Carrier> carrier;
            if (!j.at("carrier").is_null())
                carrier = Carrier{{j["carrier"]["v"][0].get<double>(), j["carrier"]["v"][1].get<double>()},
                                  j["carrier"]["alpha"].get<double>()};
            write("hull.svg", svg_hull(hull, carrier));
        } else if (name == "deviation") {
            std::vector<long> n;
            std::vector<double> D, M;
            for (const auto& row : read_csv(read_file(d / "deviations.csv"))) {
                if (row.size() != 3) throw Error("malformed deviations.csv");
                n.push_back(std::stol(row[0]));
                D.push_back(std::stod(row[1]));
                M.push_back(std::stod(row[2]));
            }
            write("deviation.svg", svg_profile(n, D, M));
        } else if (name == "mask") {
            const Json j = Json::parse(read_file(d / "stableset.json"));
            const BoolGrid mask = read_pgm(read_file(d / "stableset.pgm"));
            const Window w = window_from_json(j.at("window"));
            const Vec2 v{j["v"][0].get<double>(), j["v"][1].get<double>()};
            write("mask.svg", svg_mask(mask, w, v, j.at("cap_fraction").get<double>(), {j.at("r").get<double>()}));
        } else {
            const Json j = Json::parse(read_file(d / "chart.json"));
            const Window w = window_from_json(j.at("window"));
            const Vec2 v{j["v"][0].get<double>(), j["v"][1].get<double>()};
            std::vector<PseudoLeaf> leaves;
            for (const auto& row : read_csv(read_file(d / "leaves.csv"))) {
                if (row.size() != 5) throw Error("malformed leaves.csv");
                const double level = std::stod(row[0]);
                const std::size_t poly = std::stoul(row[1]);
                if (leaves.empty() || leaves.back().level != level) {
                    leaves.push_back({});
                    leaves.back().level = level;
                    leaves.back().direction = perp(v);
                }
                auto& lines = leaves.back().polylines;
                if (lines.size() <= poly) lines.resize(poly + 1);
                lines[poly].push_back({std::stod(row[3]), std::stod(row[4])});
            }
            write("leaves.svg", svg_leaves(leaves, w, v));
        }
    }
}

void Pipeline::write_manifest() {
    Json j;
    j["tool"] = {{"name", "rotdev"}, {"version", kToolVersion}, {"manifest_format", 1}};
    j["subcommand"] = to_string(opts_.subcommand);
    j["config"] = cfg_.to_json();
    j["map"] = {{"family", to_string(cfg_.map.tag)},
                {"canonical", cfg_.map.canonical_string()},
                {"hash", hex64(map_hash_)},
                {"inverse_mode", to_string(map_.inverse_mode())},
                {"contraction_bound", map_.contraction_bound()},
                {"sup_norm_bound", map_.sup_norm_bound()}};
    j["stages"] = stages_;
    Json verdicts;
    if (est_) verdicts["classification"] = to_string(est_->classification);
    if (profile_) verdicts["deviation"] = to_string(profile_->verdict);
    if (profile_) verdicts["sandwich"] = "ok";
    if (cert_) verdicts["foliation_certificate"] = cert_->all_passed() ? "all_passed" : "failed";
    else if (foliation_skipped_) verdicts["foliation_certificate"] = "skipped";
    if (stages_.contains("verify")) verdicts["verify"] = stages_["verify"]["all_passed"].get<bool>() ? "passed" : "failed";
    j["verdicts"] = verdicts;
    Json t = timings_;
    t["unit"] = "nominal map evaluations";
    j["timings"] = t;
    Json arts = Json::array();
    for (const auto& [name, content] : artifacts_)
        arts.push_back({{"name", name}, {"bytes", content.size()}, {"fnv1a", hex64(fnv1a(content))}});
    j["artifacts"] = arts;
    const std::string text = dump_json(j);
    write("manifest.json", text);
}

void Pipeline::execute() {
    map_hash_ = cfg_.map.hash();
    const Subcommand sub = opts_.subcommand;
    if (sub == Subcommand::render) {
        render();
        return;
    }
    auto at_least = [&](Subcommand s) { return static_cast<int>(sub) >= static_cast<int>(s); };
    stage_rotset();
    if (at_least(Subcommand::deviation)) stage_deviation();
    if (at_least(Subcommand::stableset)) stage_stableset();
    if (sub == Subcommand::foliation) {
        stage_foliation();
    } else if (sub == Subcommand::verify) {
        if (profile_->verdict == Verdict::bounded || opts_.force)
            stage_foliation();
        else
            foliation_skipped_ = true;
        stage_verify();
    }
    write_manifest();
    if (cache_.policy() != CachePolicy::off)
        log_ << "cache: " << cache_.hits() << " hits, " << cache_.misses() << " misses\n";
    if (sub == Subcommand::verify && !stages_["verify"]["all_passed"].get<bool>())
        throw NumericalError("verify: " + std::to_string(stages_["verify"]["failed"].get<std::size_t>()) +
                             " invariant checks failed (see verify.json)");
}

} // namespace

int run(const RunOptions& opts, std::ostream& log) {
    try {
        RunConfig cfg = load_config(opts.config_path);
        std::error_code ec;
        fs::create_directories(opts.out_dir, ec);
        if (ec) throw ConfigError("cannot create output directory " + opts.out_dir.string());
        DirLock lock(opts.out_dir);
        Pipeline p(opts, std::move(cfg), log);
        p.execute();
        return kExitOk;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UnknownArtifact& e) {
        log << "unknown artifact: " << e.what() << "\n";
        return kExitConfig;
    } catch (const StageDependencyError& e) {
        log << "stage dependency: " << e.what() << "\n";
        return kExitDependency;
    } catch (const NumericalError& e) {
        log << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const PreconditionError& e) {
        log << "precondition: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace rotdev
