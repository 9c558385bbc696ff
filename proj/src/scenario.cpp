#include "dirac11/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dirac11/errors.hpp"
#include "dirac11/linear_dirac.hpp"
#include "dirac11/synth.hpp"
#include "dirac11/thirring.hpp"

namespace d11 {

const std::vector<std::pair<std::string, std::string>>& builtin_presets()
{
    static const std::vector<std::pair<std::string, std::string>> p = {
        {"free_chiral", R"([scenario]
name = free_chiral
model = free
[grid]
L = 6.283185307179586
N = 128
[time]
T = 6.283185307179586
output_every = 8
[initial]
preset = random
seed = 11
max_mode = 4
amplitude = 1
[monitors]
names = E1, E2, E3, E4, E5, thirring_box
)"},
        {"massive_plane_wave", R"([scenario]
name = massive_plane_wave
model = massive
[grid]
L = 6.283185307179586
N = 256
[time]
T = 1
output_every = 4
[params]
lambda = 1
[initial]
preset = plane_wave
mode = 2
branch = 1
[monitors]
names = E1, E6hat
refinement = true
)"},
        {"twisted_abelian", R"([scenario]
name = twisted_abelian
model = twisted
[grid]
L = 6.283185307179586
N = 256
[time]
T = 2
output_every = 4
[params]
connection = abelian_curved
connection_amplitude = 0.5
connection_mode = 1
rank = 1
[initial]
preset = random
seed = 5
max_mode = 3
amplitude = 0.5
[monitors]
names = all
refinement = true
)"},
        {"thirring_massless", R"([scenario]
name = thirring_massless
model = thirring
[grid]
L = 6.283185307179586
N = 256
[time]
T = 2
output_every = 4
[params]
lambda = 0
kappa = 1
[initial]
preset = random
seed = 7
max_mode = 3
amplitude = 0.5
[monitors]
names = E1, thirring_E1, thirring_box, thirring_H1_envelope
refinement = true
)"},
        {"thirring_massive", R"([scenario]
name = thirring_massive
model = thirring
[grid]
L = 6.283185307179586
N = 256
[time]
T = 2
output_every = 4
[params]
lambda = 1
kappa = 1
[initial]
preset = random
seed = 7
max_mode = 3
amplitude = 0.5
[monitors]
names = thirring_E1, thirring_box, thirring_L6, thirring_H1_envelope
refinement = true
)"},
        {"dwm_geodesic", R"([scenario]
name = dwm_geodesic
model = dirac_wave_map
[grid]
L = 6.283185307179586
N = 128
[time]
T = 2
output_every = 4
[params]
target = sphere
q = 3
[initial]
preset = geodesic
a = 1
b = 1
[monitors]
names = E_DW, box_e_phi, T_divergence
refinement = true
)"},
        {"dwm_uncoupled_exact", R"([scenario]
name = dwm_uncoupled_exact
model = dirac_wave_map
[grid]
L = 6.283185307179586
N = 128
[time]
T = 1
output_every = 4
[params]
target = sphere
q = 3
[initial]
preset = uncoupled
a = 1
b = 1
spinor_amplitude = 1
[monitors]
names = E1, E_DW, box_e_phi, T_divergence, E_psi_1_4
)"},
        {"dwm_random_smooth", R"([scenario]
name = dwm_random_smooth
model = dirac_wave_map
[grid]
L = 6.283185307179586
N = 256
[time]
T = 2
output_every = 4
[params]
target = sphere
q = 3
audit_factor = 1
[initial]
preset = random
seed = 3
max_mode = 2
amplitude = 0.3
spinor_amplitude = 1
[monitors]
names = all
refinement = true
)"},
        {"gronwall_pair", R"([scenario]
name = gronwall_pair
model = dirac_wave_map
[grid]
L = 6.283185307179586
N = 256
[time]
T = 2
output_every = 4
[params]
target = sphere
q = 3
[initial]
preset = random
seed = 3
max_mode = 2
amplitude = 0.3
spinor_amplitude = 1
perturbation = 1e-6
[monitors]
names = E1, gronwall_envelope
)"},
    };
    return p;
}

std::optional<std::string> preset_text(const std::string& name)
{
    for (const auto& [n, text] : builtin_presets())
        if (n == name)
            return text;
    return std::nullopt;
}

Grid scenario_grid(const ScenarioConfig& c)
{
    return Grid::make(c.L, c.N);
}

Connection scenario_connection(const ScenarioConfig& c)
{
    if (c.connection == "abelian_curved")
        return abelian_curved(c.connection_amplitude, c.connection_mode, c.L);
    if (c.connection == "nonabelian")
        return nonabelian_example(c.connection_amplitude, c.connection_mode, c.L, 1.0);
    return flat_connection(c.rank);
}

Target scenario_target(const ScenarioConfig& c)
{
    return c.target == "flat_torus" ? Target::flat_torus(c.q) : Target::sphere(c.q);
}

namespace {

constexpr std::uint64_t kPerturbSeed = 0x9e3779b97f4a7c15ULL;

Field<Spinor> add_scaled(const Field<Spinor>& a, double s, const Field<Spinor>& b)
{
    return s == 0.0 ? a : axpy(a, s, b);
}

} // namespace

Field<Spinor> spinor_initial(const ScenarioConfig& c, const Grid& g, double delta)
{
    Field<Spinor> psi = c.preset == "plane_wave" ? plane_wave(g, c.mode, c.lambda, c.branch).at(0.0)
                                                 : random_spinor_field(g, c.seed, c.max_mode, c.amplitude);
    if (delta > 0.0)
        psi = add_scaled(psi, delta, random_spinor_field(g, c.seed ^ kPerturbSeed, c.max_mode, 1.0));
    return psi;
}

TwistedSpinorField twisted_initial(const ScenarioConfig& c, const Grid& g)
{
    TwistedSpinorField psi;
    for (int a = 0; a < c.rank; ++a)
        psi.push_back(random_spinor_field(g, c.seed + 101 * a, c.max_mode, c.amplitude));
    return psi;
}

namespace {

struct MapData {
    std::vector<Trig> phi0, phi1;
    std::vector<SpinorSynth> psi0;
};

MapData map_data(const ScenarioConfig& c, std::uint64_t seed, double amp, double spinor_amp)
{
    Rng rng(seed);
    MapData d;
    for (int a = 0; a < c.q; ++a)
        d.phi0.push_back(random_trig(rng, c.L, c.max_mode, amp));
    for (int a = 0; a < c.q; ++a)
        d.phi1.push_back(random_trig(rng, c.L, c.max_mode, amp));
    for (int a = 0; a < c.q; ++a)
        d.psi0.push_back(random_spinor_synth(rng, c.L, c.max_mode, spinor_amp));
    return d;
}

void project_onto(const VecField& phi, VecField& v)
{
    for (int i = 0; i < phi[0].size(); ++i) {
        double s = 0.0;
        for (std::size_t a = 0; a < phi.size(); ++a)
            s += phi[a][i] * v[a][i];
        for (std::size_t a = 0; a < phi.size(); ++a)
            v[a][i] -= s * phi[a][i];
    }
}

void project_onto(const VecField& phi, MultiSpinorField& v)
{
    for (int i = 0; i < phi[0].size(); ++i) {
        Spinor s;
        for (std::size_t a = 0; a < phi.size(); ++a)
            s += phi[a][i] * v[a][i];
        for (std::size_t a = 0; a < phi.size(); ++a)
            v[a][i] -= phi[a][i] * s;
    }
}

} // namespace

DWState dwm_initial(const ScenarioConfig& c, const Grid& g, double delta)
{
    const Target target = scenario_target(c);
    if (c.preset == "geodesic" || c.preset == "uncoupled") {
        UncoupledSolution sol{g, c.a, c.b, Spinor{}, Spinor{}};
        if (c.preset == "uncoupled") {
            sol.chi1 = Spinor{cplx(c.spinor_amplitude, 0.0), cplx(0.0, 0.5 * c.spinor_amplitude)};
            return dwm_init_exact(sol.phi(0.0), sol.phi(-g.dx), sol.psi(0.0));
        }
        return dwm_init(sol.phi(0.0), sol.phi_t(0.0), sol.psi(0.0), target);
    }

    const bool sphere = target.kind == TargetKind::sphere;
    MapData d = map_data(c, c.seed, c.amplitude, c.spinor_amplitude);
    VecField phi0, phi1;
    MultiSpinorField psi0;
    for (int a = 0; a < c.q; ++a) {
        phi0.push_back(sample<double>(g, d.phi0[a]));
        phi1.push_back(sample<double>(g, d.phi1[a]));
        psi0.push_back(sample<Spinor>(g, d.psi0[a]));
    }
    if (delta > 0.0) {
        MapData p = map_data(c, c.seed ^ kPerturbSeed, 1.0, 1.0);
        for (int a = 0; a < c.q; ++a) {
            phi0[a] = axpy(phi0[a], delta, sample<double>(g, p.phi0[a]));
            phi1[a] = axpy(phi1[a], delta, sample<double>(g, p.phi1[a]));
            psi0[a] = axpy(psi0[a], delta, sample<Spinor>(g, p.psi0[a]));
        }
    }
    if (sphere) {
        for (int i = 0; i < g.N; ++i) {
            phi0[c.q - 1][i] += 1.0;
            double n = 0.0;
            for (int a = 0; a < c.q; ++a)
                n += phi0[a][i] * phi0[a][i];
            n = std::sqrt(n);
            for (int a = 0; a < c.q; ++a)
                phi0[a][i] /= n;
        }
        project_onto(phi0, phi1);
        project_onto(phi0, psi0);
    }
    if (c.preset == "free_spinor") {
        for (auto& f : phi1)
            f = Field<double>(g);
    }
    return dwm_init(phi0, phi1, psi0, target);
}

RunHistory simulate(const ScenarioConfig& c)
{
    return simulate(c, scenario_grid(c), c.steps());
}

RunHistory simulate(const ScenarioConfig& c, const Grid& g, int steps)
{
    RunHistory h;
    h.model = c.model;
    h.lambda = c.lambda;
    h.kappa = c.kappa;
    const bool partner = c.perturbation > 0.0;
    if (c.model == "free") {
        Trajectory<Spinor> tr;
        tr.dt = g.dx;
        tr.levels.push_back(spinor_initial(c, g));
        for (int s = 0; s < steps; ++s)
            tr.levels.push_back(free_transport_step(tr.levels.back()));
        h.spinor = std::move(tr);
    } else if (c.model == "massive") {
        h.spinor = run_linear({g, c.lambda, spinor_initial(c, g)}, steps);
    } else if (c.model == "thirring") {
        ThirringProblem p;
        p.grid = g;
        p.lambda = c.lambda;
        p.kappa = c.kappa;
        p.integrator = c.integrator == "midpoint" ? ThirringIntegrator::midpoint : ThirringIntegrator::split;
        p.initial = spinor_initial(c, g);
        h.spinor = run_thirring(p, steps);
        if (partner) {
            p.initial = spinor_initial(c, g, c.perturbation);
            h.spinor_partner = run_thirring(p, steps);
        }
    } else if (c.model == "twisted") {
        h.connection = scenario_connection(c);
        h.twisted = run_twisted(twisted_initial(c, g), h.connection, c.lambda, steps);
        for (int n = 0; n < h.twisted.size(); ++n)
            for (const auto& f : h.twisted.levels[n])
                if (!all_finite(f))
                    throw InstabilityError(n, "non-finite twisted spinor values");
    } else {
        const Target target = scenario_target(c);
        h.dwm = run_dwm(dwm_initial(c, g), target, steps);
        if (partner)
            h.dwm_partner = run_dwm(dwm_initial(c, g, c.perturbation), target, steps);
        h.sigma = 1.0;
        if (h.dwm.size() >= 3)
            h.audit_constant = dw_audit_constant(h.dwm, c.audit_factor);
    }
    return h;
}

MonitorSummary summarize(const Series& coarse, const RunHistory& h, const Series* fine, const RunHistory* hf)
{
    MonitorSummary m;
    m.name = coarse.name;
    m.kind = coarse.kind;
    switch (coarse.kind) {
    case MonitorKind::conserved:
    case MonitorKind::identity_residual: {
        const bool conserved = coarse.kind == MonitorKind::conserved;
        m.statistic = conserved ? relative_drift(coarse) : residual_norm(coarse, h.dt());
        if (fine && hf) {
            m.fine_statistic = conserved ? relative_drift(*fine) : residual_norm(*fine, hf->dt());
            m.order = refinement_order(m.statistic, *m.fine_statistic, conserved ? kExactFloor : kResidualFloor);
            m.verdict = (m.order->exact || m.order->value >= 1.5) ? "PASS" : "FAIL";
        }
        break;
    }
    case MonitorKind::inequality_audit:
        m.audit = audit(coarse);
        m.statistic = m.audit->margin;
        m.verdict = m.audit->pass ? "PASS" : "FAIL";
        break;
    case MonitorKind::envelope_fit: {
        std::vector<double> t;
        for (int n = 0; n < (int)coarse.values.size(); ++n)
            t.push_back(h.time(n));
        m.fit = fit_envelope(t, coarse.values);
        m.statistic = m.fit->rate;
        m.verdict = m.fit->valid ? "PASS" : "FAIL";
        break;
    }
    }
    return m;
}

ScenarioOutput run_scenario(const ScenarioConfig& c)
{
    ScenarioOutput out;
    out.history = simulate(c);
    out.series = evaluate_all(c.monitors, out.history);
    std::optional<RunHistory> fine;
    std::vector<Series> fine_series;
    if (c.refinement) {
        ScenarioConfig f = c;
        f.N = 2 * c.N;
        fine = simulate(f, scenario_grid(f), 2 * c.steps());
        fine_series = evaluate_all(c.monitors, *fine);
    }
    for (std::size_t i = 0; i < out.series.size(); ++i)
        out.summary.push_back(summarize(out.series[i], out.history, fine ? &fine_series[i] : nullptr,
                                        fine ? &*fine : nullptr));
    out.csv = format_csv(out.history, out.series, c.output_every);
    out.report = format_report(c, out);
    return out;
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string format_csv(const RunHistory& h, const std::vector<Series>& series, int every)
{
    std::string s = "t";
    for (const auto& m : series)
        s += "," + m.name;
    s += "\n";
    for (int n = 0; n < h.size(); n += every) {
        s += format_number(h.time(n));
        for (const auto& m : series)
            s += "," + format_number(m.values.at(n));
        s += "\n";
    }
    return s;
}

std::string format_report(const ScenarioConfig& c, const ScenarioOutput& out)
{
    std::ostringstream r;
    r << "scenario " << c.name << "\n";
    r << "model " << c.model << "\n";
    r << "grid L=" << format_number(c.L) << " N=" << c.N << " dt=dx=" << format_number(c.L / c.N) << "\n";
    r << "steps " << c.steps() << " T=" << format_number(c.steps() * c.L / c.N) << "\n";
    r << "params lambda=" << format_number(c.lambda) << " kappa=" << format_number(c.kappa);
    if (c.model == "twisted")
        r << " connection=" << c.connection << " rank=" << c.rank;
    if (c.model == "thirring")
        r << " integrator=" << c.integrator;
    if (c.model == "dirac_wave_map")
        r << " target=" << c.target << " q=" << c.q << " sigma=" << format_number(out.history.sigma)
          << " audit_C=" << format_number(out.history.audit_constant);
    r << "\n";
    r << "initial " << c.preset << " seed=" << c.seed << "\n";
    if (c.model == "dirac_wave_map") {
        double sph = 0.0, tan = 0.0;
        for (const auto& l : out.history.dwm.levels) {
            sph = std::max(sph, sphere_defect(l));
            tan = std::max(tan, tangency_defect(l));
        }
        if (c.target == "sphere")
            r << "constraints sphere=" << format_number(sph) << " tangency=" << format_number(tan)
              << " max_projection=" << format_number(out.history.dwm.max_projection) << "\n";
    }
    r << "\nmonitor kind statistic fine order verdict detail\n";
    for (const auto& m : out.summary) {
        r << m.name << " " << to_string(m.kind) << " " << format_number(m.statistic) << " "
          << (m.fine_statistic ? format_number(*m.fine_statistic) : "-") << " " << (m.order ? m.order->str() : "-")
          << " " << m.verdict;
        if (m.fit)
            r << " rate=" << format_number(m.fit->rate) << " intercept=" << format_number(m.fit->intercept)
              << " window_lift=" << format_number(m.fit->window_lift) << " r2=" << format_number(m.fit->r2);
        if (m.audit)
            r << " margin=" << format_number(m.audit->margin) << " worst_step=" << m.audit->worst_step;
        r << "\n";
    }
    return r.str();
}

std::filesystem::path output_directory(const ScenarioConfig& c)
{
    std::filesystem::path dir = c.output_dir.empty() ? std::filesystem::path(c.name) : std::filesystem::path(c.output_dir);
    if (dir.is_relative()) {
        if (const char* root = std::getenv("DIRAC11_OUTPUT_ROOT"); root && *root)
            dir = std::filesystem::path(root) / dir;
    }
    return dir;
}

int execute(const ScenarioConfig& c, std::ostream& log)
{
    ScenarioOutput out;
    try {
        out = run_scenario(c);
    } catch (const InstabilityError& e) {
        log << "error: " << e.what() << "\n";
        return 3;
    }
    const auto dir = output_directory(c);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "series.csv", std::ios::binary) << out.csv;
    std::ofstream(dir / "report.txt", std::ios::binary) << out.report;
    log << c.name << ": wrote " << (dir / "series.csv").string() << "\n";
    return 0;
}

} // namespace d11
