#include "acdisc/continuation.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace acdisc;
using testing_rng = acdisc::testing::Rng;

namespace {

constexpr double kTau = 6.283185307179586;

double disc_distance(const LiftedDisc& a, const LiftedDisc& b) {
    return std::max((a.f + b.f.scaled(cx(-1.0))).max_abs_coeff(),
                    (a.g + b.g.scaled(cx(-1.0))).max_abs_coeff());
}

LiftedDisc random_direction(testing_rng& rng, int n, int cap, double scale) {
    return LiftedDisc(acdisc::testing::random_disc_map(rng, n, cap, scale),
                      acdisc::testing::random_disc_map(rng, n, cap, scale));
}

LiftedDisc shifted(const LiftedDisc& base, const LiftedDisc& dir, double t) {
    return LiftedDisc(base.f + dir.f.scaled(cx(t)), base.g + dir.g.scaled(cx(t)));
}

// anisotropic transport of a solution of the t = 1 problem to the t-problem:
// base coordinates through the inverse dilation, fibre by its transpose
LiftedDisc push_to(const LiftedDisc& d, double t) {
    const int n = d.dim();
    DiscMap f = d.f, g = d.g;
    for (int k = 0; k + 1 < n; ++k) {
        f.set_component(k, d.f.component(k).scaled(cx(1.0 / t)));
        g.set_component(k, d.g.component(k).scaled(cx(t)));
    }
    f.set_component(n - 1, d.f.component(n - 1).scaled(cx(1.0 / (t * t))));
    g.set_component(n - 1, d.g.component(n - 1).scaled(cx(t * t)));
    return {f, g};
}

double log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const int m = static_cast<int>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < m; ++i) {
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ContinuationProblem model_problem(int n, const Mat& a, double x, std::vector<cx> v) {
    std::vector<cx> zo(n, cx(0.0));
    zo[n - 1] = cx(x, 0.0);
    return ContinuationProblem(AcsModel::model_structure(n, a),
                               HypersurfaceModel::quadric_model(n), std::move(zo), std::move(v));
}

ContinuationProblem deformed_problem(uint64_t seed, int n, double scale, double x,
                                     std::vector<cx> v) {
    testing_rng rng(seed);
    AcsModel j = acdisc::testing::random_exact_standard_acs(rng, n, scale);
    HypersurfaceModel s = acdisc::testing::random_standard_hypersurface(rng, n, scale);
    std::vector<cx> zo(n, cx(0.0));
    zo[n - 1] = cx(x, 0.0);
    return ContinuationProblem(std::move(j), std::move(s), std::move(zo), std::move(v));
}

// realified angle defect between the centre x-derivative and the target line
double tangency_defect(const ContinuationProblem& prob, const LiftedDisc& d) {
    const int n = prob.structure.n;
    const cx a(std::sqrt(2.0 * prob.target_point[n - 1].real()), 0.0);
    const std::vector<cx> f0 = d.f.eval(cx(0.0));
    const std::vector<cx> dm = d.f.wirtinger(false).eval(cx(0.0));
    const std::vector<cx> dp = d.f.wirtinger(true).eval(cx(0.0));
    Vec dx(n), v(n);
    for (int k = 0; k < n; ++k) {
        dx(k) = dm[k] + dp[k];
        v(k) = prob.target_direction[k];
    }
    const Vec w = complex_action(cx(1.0) / a, dx, prob.structure, f0);
    const Vec u = complex_action(cx(1.0) / a, v, prob.structure, prob.target_point);
    RVec wr(2 * n), ur(2 * n);
    for (int k = 0; k < n; ++k) {
        wr(k) = w(k).real();
        wr(n + k) = w(k).imag();
        ur(k) = u(k).real();
        ur(n + k) = u(k).imag();
    }
    ur /= ur.norm();
    return (wr - ur.dot(wr) * ur).norm() / wr.norm();
}

struct DeformedRun {
    ContinuationProblem prob;
    LiftedDisc disc;
    ContinuationTrace trace;
};

// One end-to-end run on a deformed pair, shared by the tests that inspect it.
// The direction's normal part stays well inside the degree-N representable
// cone (|v_n|/a ~ 1e-2), and newton_tol sits above the measured truncation
// floor of the t = 1 problem (~1e-9 for this configuration).
const DeformedRun& deformed_run() {
    static const DeformedRun run = [] {
        ContinuationProblem prob =
            deformed_problem(4021, 2, 0.05, 0.005, {cx(1.0, 0.2), cx(0.001, 0.0005)});
        prob.newton_tol = 3e-9;
        auto [disc, trace] = continue_disc(prob);
        return DeformedRun{prob, disc, trace};
    }();
    return run;
}

TEST(EffectiveSystem, MatchesModelClosedFormAndBridgesResiduals) {
    testing_rng rng(101);
    const int n = 3;
    const Mat a = acdisc::testing::random_antisymmetric(rng, n - 1, 0.6);
    const detail::DiscSystem sys = detail::effective_system(AcsModel::model_structure(n, a));
    const LiftedStructure ml = model_lifted_structure(n, a);
    EXPECT_LE((sys.t1 - ml.T1).max_abs_coeff(), 1e-14);
    EXPECT_LE((sys.t2 - ml.T2).max_abs_coeff(), 1e-14);

    ContinuationProblem prob = model_problem(n, a, 0.08, {cx(1.0), cx(0.0), cx(0.0)});
    prob.N = 5;
    const detail::ContinuationWorkspace ws(0.0, prob);
    const LiftedDisc fd = random_direction(rng, n, 4, 0.05);
    const RVec rows = ws.interior(fd);
    const DiscMap res = detail::holo_residual_core(ws.sys.t1, ws.sys.t2, fd.stacked());
    int row = 0;
    for (cx z : ws.inodes) {
        const std::vector<cx> rv = res.eval(z);
        for (int k = 0; k < 2 * n; ++k) {
            EXPECT_NEAR(rows(row++), rv[k].real(), 1e-12);
            EXPECT_NEAR(rows(row++), rv[k].imag(), 1e-12);
        }
    }
}

TEST(ProblemValidation, RejectsBadConfigurations) {
    const Mat a0 = Mat::Zero(1, 1);
    {
        ContinuationProblem p = model_problem(2, a0, 0.05, {cx(1.0), cx(0.0)});
        p.target_point[0] = cx(0.01, 0.0);  // off the normal axis
        EXPECT_THROW(p.validate(), std::invalid_argument);
    }
    {
        ContinuationProblem p = model_problem(2, a0, -0.05, {cx(1.0), cx(0.0)});
        EXPECT_THROW(p.validate(), std::invalid_argument);  // wrong side of the surface
    }
    {
        ContinuationProblem p = model_problem(2, a0, 0.05, {cx(1.0), cx(0.0)});
        p.schedule = {0.5, 1.0};  // starts too late
        EXPECT_THROW(p.validate(), std::invalid_argument);
    }
    {
        ContinuationProblem p = model_problem(2, a0, 0.05, {cx(1.0), cx(0.0)});
        p.schedule = {0.05, 0.9};  // never reaches the target pair
        EXPECT_THROW(p.validate(), std::invalid_argument);
    }
    {
        ContinuationProblem p = model_problem(2, a0, 0.05, {cx(0.0), cx(1.0)});
        EXPECT_THROW(p.validate(), std::invalid_argument);  // purely normal direction
    }
    {
        ContinuationProblem p = model_problem(2, a0, 0.05, {cx(1.0), cx(0.0)});
        p.N = 3;
        EXPECT_THROW(p.validate(), std::invalid_argument);
    }
    {
        ContinuationProblem p = model_problem(2, a0, 0.05, {cx(1.0), cx(0.0)});
        EXPECT_NO_THROW(p.validate());
    }
}

TEST(AssembleResidual, VanishesOnExplicitDiscMatchedToTargets) {
    testing_rng rng(19);
    for (int n : {2, 3}) {
        const Mat a = acdisc::testing::random_antisymmetric(rng, n - 1, 0.7);
        std::vector<cx> v(n, cx(0.0));
        v[0] = cx(0.6, -0.3);
        if (n > 2) v[1] = cx(0.2, 0.4);
        ContinuationProblem prob = model_problem(n, a, 0.08, v);
        const LiftedDisc seed = initial_disc(prob);
        EXPECT_LE(assemble_residual(0.0, seed, prob).lpNorm<Eigen::Infinity>(), 1e-12)
            << "n = " << n;
        // the model pair is fixed by the dilation family
        EXPECT_LE(assemble_residual(0.5, seed, prob).lpNorm<Eigen::Infinity>(), 1e-12)
            << "n = " << n;
    }
}

TEST(AssembleResidual, GrowsLinearlyInPerturbationSize) {
    testing_rng rng(23);
    const Mat a0 = Mat::Zero(1, 1);
    ContinuationProblem prob = model_problem(2, a0, 0.08, {cx(1.0), cx(0.0)});
    const LiftedDisc seed = initial_disc(prob);
    const LiftedDisc dir = random_direction(rng, 2, prob.N, 1.0);
    std::vector<double> sizes{1e-4, 3e-4, 1e-3, 3e-3, 1e-2}, norms;
    for (double s : sizes)
        norms.push_back(assemble_residual(0.0, shifted(seed, dir, s), prob).norm());
    EXPECT_NEAR(log_slope(sizes, norms), 1.0, 0.05);
}

TEST(AssembleResidual, IsHomotopyIndependentForTheFlatPair) {
    testing_rng rng(29);
    ContinuationProblem prob(AcsModel::standard(2), HypersurfaceModel::quadric_model(2),
                             {cx(0.0), cx(0.08)}, {cx(1.0), cx(0.0)});
    const LiftedDisc fd = shifted(initial_disc(prob), random_direction(rng, 2, prob.N, 1.0), 1e-2);
    const RVec r1 = assemble_residual(0.05, fd, prob);
    const RVec r2 = assemble_residual(0.37, fd, prob);
    const RVec r3 = assemble_residual(1.0, fd, prob);
    EXPECT_LE((r1 - r2).lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_LE((r1 - r3).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(BoundaryRows, MatchTheConormalResidualRoute) {
    testing_rng rng(31);
    ContinuationProblem prob = deformed_problem(77, 2, 0.1, 0.04, {cx(1.0), cx(0.0)});
    prob.N = 6;
    const detail::ContinuationWorkspace ws(0.7, prob);
    const LiftedDisc fd = shifted(initial_disc(prob), random_direction(rng, 2, 4, 1.0), 1e-2);
    const RVec tail = ws.tail(fd);
    const int n = prob.structure.n;
    int row = 0;
    for (cx z : ws.bnodes) {
        const ConormalResidual c = conormal_residual(ws.rt, ws.jt, fd, z);
        EXPECT_NEAR(tail(row++), c.r0, 1e-14);
        for (int i = 0; i < 2 * n - 1; ++i) EXPECT_NEAR(tail(row++), c.r(i), 1e-14);
    }
}

TEST(NewtonSolve, AcceptsExactSolutionImmediately) {
    testing_rng rng(37);
    const Mat a = acdisc::testing::random_antisymmetric(rng, 2, 0.5);
    ContinuationProblem prob = model_problem(3, a, 0.06, {cx(1.0), cx(0.0), cx(0.0)});
    prob.N = 6;
    const LiftedDisc seed = initial_disc(prob);
    NewtonInfo info;
    const LiftedDisc out = newton_solve(0.0, seed, prob, &info);
    EXPECT_EQ(info.iterations, 0);
    EXPECT_EQ(disc_distance(out, seed), 0.0);
}

TEST(NewtonSolve, ContractsByTwoOrdersPerIterationNearTheSolution) {
    testing_rng rng(41);
    const Mat a = acdisc::testing::random_antisymmetric(rng, 2, 0.5);
    ContinuationProblem prob = model_problem(3, a, 0.06, {cx(1.0), cx(0.0), cx(0.0)});
    prob.N = 6;
    prob.newton_tol = 1e-11;
    const LiftedDisc start = shifted(initial_disc(prob), random_direction(rng, 3, 4, 1.0), 1e-3);
    NewtonInfo info;
    newton_solve(0.0, start, prob, &info);
    ASSERT_GE(info.history.size(), 2u);
    EXPECT_LE(info.history.back(), prob.newton_tol);
    for (size_t k = 0; k + 1 < info.history.size(); ++k)
        if (info.history[k] > 1e-10)
            EXPECT_LE(info.history[k + 1], 1e-2 * info.history[k]) << "iteration " << k;
}

TEST(NewtonSolve, JacobianMatchesFiniteDifferences) {
    testing_rng rng(43);
    ContinuationProblem prob = deformed_problem(99, 2, 0.1, 0.04, {cx(1.0), cx(0.0)});
    prob.N = 6;
    const detail::ContinuationWorkspace ws(0.6, prob);
    const LiftedDisc fd = shifted(initial_disc(prob), random_direction(rng, 2, 4, 1.0), 1e-2);
    const RMat jac = ws.jacobian(fd);
    const RVec x0 = ws.layout.pack(fd);
    for (int trial = 0; trial < 30; ++trial) {
        const int c = static_cast<int>(rng.uniform(0.0, 1.0) * ws.layout.real_count()) %
                      ws.layout.real_count();
        const double h = 1e-6 * (1.0 + std::abs(x0(c)));
        RVec xp = x0, xm = x0;
        xp(c) += h;
        xm(c) -= h;
        const RVec fdcol =
            (ws.residual(ws.layout.unpack(xp)) - ws.residual(ws.layout.unpack(xm))) / (2.0 * h);
        const double scale = std::max(1.0, fdcol.lpNorm<Eigen::Infinity>());
        EXPECT_LE((jac.col(c) - fdcol).lpNorm<Eigen::Infinity>(), 1e-5 * scale)
            << "column " << c;
    }
}

TEST(NewtonSolve, NormalizationRowsKillTheModelKernel) {
    testing_rng rng(47);
    for (int n : {2, 3}) {
        const Mat a = acdisc::testing::random_antisymmetric(rng, n - 1, 0.5);
        std::vector<cx> v(n, cx(0.0));
        v[0] = cx(1.0);
        ContinuationProblem prob = model_problem(n, a, 0.06, v);
        prob.N = 6;
        const detail::ContinuationWorkspace ws(0.0, prob);
        const LiftedDisc seed = initial_disc(prob);
        const RMat jac = ws.jacobian(seed);
        const int cols = static_cast<int>(jac.cols());

        Eigen::BDCSVD<RMat> full(jac);
        const RVec sf = full.singularValues();
        EXPECT_GE(sf(cols - 1), 1e-6 * sf(0)) << "n = " << n;

        const RMat sub = jac.topRows(ws.interior_rows() + ws.boundary_rows());
        Eigen::BDCSVD<RMat> part(sub);
        const RVec sp = part.singularValues();
        const int kept = cols - 4 * n;
        EXPECT_GE(sp(kept - 1) / sp(kept), 1e6) << "n = " << n;
        EXPECT_LE(sp(kept), 1e-8 * sp(0)) << "n = " << n;
    }
}

TEST(NewtonSolve, ReportsTheIterationCap) {
    testing_rng rng(53);
    ContinuationProblem prob = deformed_problem(99, 2, 0.1, 0.04, {cx(1.0), cx(0.0)});
    prob.N = 6;
    prob.newton_tol = 1e-15;
    prob.max_newton = 1;
    const LiftedDisc start = shifted(initial_disc(prob), random_direction(rng, 2, 4, 1.0), 3e-2);
    try {
        newton_solve(0.3, start, prob);
        FAIL() << "iteration cap not enforced";
    } catch (const StepRejected& e) {
        EXPECT_NE(std::string(e.what()).find("iterations"), std::string::npos);
    }
}

TEST(ContinueDisc, ReproducesTheModelFamily) {
    testing_rng rng(59);
    const Mat a = acdisc::testing::random_antisymmetric(rng, 2, 0.5);
    ContinuationProblem prob = model_problem(3, a, 0.06, {cx(1.0), cx(0.0), cx(0.0)});
    const auto [disc, trace] = continue_disc(prob);
    ASSERT_TRUE(trace.converged) << trace.message;
    for (const auto& step : trace.steps) {
        EXPECT_TRUE(step.accepted);
        EXPECT_EQ(step.iterations, 0);
        EXPECT_LE(step.residual, prob.residual_tol);
    }
    EXPECT_EQ(trace.snapshots.size(), prob.schedule.size());
    const double x = prob.target_point[2].real();
    const LiftedDisc expl = explicit_disc(ModelProblem(3, a, prob.N),
                                          BasePoint(cx(std::sqrt(2.0 * x), 0.0), 1.0));
    EXPECT_LE(disc_distance(disc, expl), 1e-10);
}

TEST(ContinueDisc, ConvergesOnADeformedPairAndMeetsTheTargets) {
    const DeformedRun& run = deformed_run();
    ASSERT_TRUE(run.trace.converged) << run.trace.message;
    for (const auto& step : run.trace.steps)
        if (step.accepted) EXPECT_LE(step.residual, run.prob.residual_tol);

    const StationarityReport rep =
        verify_stationary(run.prob.structure, run.prob.surface, run.disc, run.prob.residual_tol);
    EXPECT_TRUE(rep.pass) << rep.projection.residual << " " << rep.interior.residual << " "
                          << rep.boundary.residual;

    const std::vector<cx> f0 = run.disc.f.eval(cx(0.0));
    double centre = 0.0;
    for (int k = 0; k < 2; ++k) centre = std::max(centre, std::abs(f0[k] - run.prob.target_point[k]));
    EXPECT_LE(centre, 1e-8);
    EXPECT_LE(tangency_defect(run.prob, run.disc), 1e-6);
}

TEST(ContinueDisc, RejectsDirectionsOutsideTheAdmissibleCone) {
    const Mat a0 = Mat::Zero(1, 1);
    ContinuationProblem p = model_problem(2, a0, 0.05, {cx(0.0), cx(1.0)});
    EXPECT_THROW(continue_disc(p), std::invalid_argument);
    ContinuationProblem q = model_problem(2, a0, 0.05, {cx(1e-12, 0.0), cx(1.0)});
    EXPECT_THROW(continue_disc(q), std::invalid_argument);
}

TEST(ContinueDisc, PushedSolutionSolvesTheIntermediateProblem) {
    const DeformedRun& run = deformed_run();
    ASSERT_TRUE(run.trace.converged);
    const double t = 0.5;
    const LiftedDisc pushed = push_to(run.disc, t);
    ContinuationProblem prob = run.prob;
    prob.target_point[1] /= t * t;
    prob.target_direction[0] /= t;
    prob.target_direction[1] /= t * t;
    prob.lambda_target *= t * t;
    EXPECT_LE(assemble_residual(t, pushed, prob).lpNorm<Eigen::Infinity>(),
              run.prob.residual_tol);
}

TEST(ContinueDisc, TraceIsDeterministic) {
    const DeformedRun& run = deformed_run();
    const auto [disc, trace] = continue_disc(run.prob);
    ASSERT_EQ(trace.steps.size(), run.trace.steps.size());
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        EXPECT_EQ(trace.steps[i].t, run.trace.steps[i].t);
        EXPECT_EQ(trace.steps[i].iterations, run.trace.steps[i].iterations);
        EXPECT_EQ(trace.steps[i].residual, run.trace.steps[i].residual);
        EXPECT_EQ(trace.steps[i].accepted, run.trace.steps[i].accepted);
    }
    EXPECT_EQ(disc_distance(disc, run.disc), 0.0);
}

TEST(ContinueDisc, DirectionScalingLeavesTheDiscUnchanged) {
    const DeformedRun& run = deformed_run();
    ContinuationProblem prob = run.prob;
    for (cx& v : prob.target_direction) v *= 2.5;
    const auto [disc, trace] = continue_disc(prob);
    ASSERT_TRUE(trace.converged) << trace.message;
    EXPECT_LE(disc_distance(disc, run.disc), 1e-6);
}

TEST(ContinueDisc, FailureCascadeStopsAtTheMinimalStep) {
    ContinuationProblem prob = deformed_problem(99, 2, 0.1, 0.04, {cx(1.0), cx(0.0)});
    prob.N = 6;
    prob.newton_tol = 1e-15;  // unreachable: forces rejection
    prob.max_newton = 1;
    prob.min_step = 0.3;
    const auto [disc, trace] = continue_disc(prob);
    EXPECT_FALSE(trace.converged);
    ASSERT_FALSE(trace.steps.empty());
    EXPECT_FALSE(trace.steps.back().accepted);
    EXPECT_NE(trace.message.find("minimal step"), std::string::npos);
}

TEST(VerifyStationary, GradesTheThreeDefiningConditions) {
    testing_rng rng(61);
    const Mat a = acdisc::testing::random_antisymmetric(rng, 2, 0.5);
    const AcsModel j = AcsModel::model_structure(3, a);
    const HypersurfaceModel s = HypersurfaceModel::quadric_model(3);
    const LiftedDisc disc = explicit_disc(ModelProblem(3, a, 8), BasePoint(cx(0.4, 0.2), 1.0));

    const StationarityReport good = verify_stationary(j, s, disc, 1e-10);
    EXPECT_TRUE(good.pass);
    EXPECT_TRUE(good.projection.pass && good.interior.pass && good.boundary.pass);

    const LiftedDisc zeroed(disc.f, DiscMap(3, disc.g.degree_cap()));
    const StationarityReport nosec = verify_stationary(j, s, zeroed, 1e-10);
    EXPECT_FALSE(nosec.pass);
    EXPECT_FALSE(nosec.boundary.pass);
    EXPECT_TRUE(nosec.projection.pass);
    EXPECT_TRUE(nosec.interior.pass);

    DiscMap f_off = disc.f;
    f_off.add_coeff(0, 0, 2, cx(5e-4, 0.0));
    const StationarityReport off = verify_stationary(j, s, LiftedDisc(f_off, disc.g), 1e-8);
    EXPECT_FALSE(off.pass);
    EXPECT_FALSE(off.boundary.pass);
    EXPECT_GE(off.boundary.residual, 2e-4);
    EXPECT_LE(off.boundary.residual, 5e-3);
}

}  // namespace
