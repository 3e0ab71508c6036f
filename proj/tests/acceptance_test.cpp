// Acceptance suite: the ten headline claims, evaluated against one master
// sweep run at production defaults (5 families x 21 points, all measures,
// seed 42, 50 restarts). Each test prints one [ACCEPT] line.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "qbias/qbias.hpp"

using namespace qbias;

namespace {

RunConfig master_config() {
    RunConfig rc;
    rc.families = {"ad", "bf", "bpf", "dc", "pf"};
    rc.p_start = 0.0;
    rc.p_end = 1.0;
    rc.p_steps = 21;
    rc.measures = MeasureSet::all();
    rc.optimizer.seed = 42;  // defaults otherwise: 50 restarts, top_k 3
    return rc;
}

class AcceptanceSuite : public ::testing::Test {
protected:
    static std::vector<SweepPoint> master;
    static std::string master_csv;
    static std::int64_t master_ms;

    static void SetUpTestSuite() {
        const auto t0 = std::chrono::steady_clock::now();
        master = run_sweep(master_config());
        master_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        master_csv = emit_csv(master);
    }

    void TearDown() override {
        std::printf("[ACCEPT] criterion %d (%s): %s\n", criterion_, name_,
                    HasFailure() ? "FAIL" : "PASS");
        std::fflush(stdout);
    }

    void label(int criterion, const char* name) {
        criterion_ = criterion;
        name_ = name;
    }

    static std::vector<const SweepPoint*> rows(const std::string& family) {
        std::vector<const SweepPoint*> out;
        for (const SweepPoint& pt : master)
            if (pt.family == family) out.push_back(&pt);
        return out;
    }

private:
    int criterion_ = 0;
    const char* name_ = "";
};

std::vector<SweepPoint> AcceptanceSuite::master;
std::string AcceptanceSuite::master_csv;
std::int64_t AcceptanceSuite::master_ms = 0;

} // namespace

TEST_F(AcceptanceSuite, DepolarizingSavesNothing) {
    label(1, "SE vanishes for the depolarizing family");
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig rc = master_config();
    rc.families = {"dc"};
    rc.measures = parse_measures("se");
    const std::vector<SweepPoint> dc_only = run_sweep(rc);
    const std::int64_t elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                        std::chrono::steady_clock::now() - t0)
                                        .count();

    const std::vector<const SweepPoint*> dc_rows = rows("dc");
    ASSERT_EQ(dc_rows.size(), 21u);
    ASSERT_EQ(dc_only.size(), 21u);
    for (std::size_t i = 0; i < 21; ++i) {
        EXPECT_LE(*dc_rows[i]->se, 1e-4) << "p=" << dc_rows[i]->p;
        EXPECT_GE(*dc_rows[i]->se, -1e-9);
        // The SE substream is keyed by (seed, family, p index) only, so the
        // stand-alone run must reproduce the master values bit for bit.
        EXPECT_EQ(*dc_only[i].se, *dc_rows[i]->se);
    }
    EXPECT_LE(elapsed_ms, 300000);
}

TEST_F(AcceptanceSuite, DampingSavesExceptAtTheEndpoints) {
    label(2, "SE(ad) zero at the endpoints, positive inside");
    const std::vector<const SweepPoint*> ad = rows("ad");
    ASSERT_EQ(ad.size(), 21u);
    EXPECT_LE(*ad.front()->se, 1e-6);
    EXPECT_LE(*ad.back()->se, 1e-6);
    for (const SweepPoint* pt : ad) {
        if (pt->p < 0.1 - 1e-12 || pt->p > 0.9 + 1e-12) continue;
        EXPECT_GT(*pt->se, 0.01) << "p=" << pt->p;
    }
}

TEST_F(AcceptanceSuite, PauliMixesSaveIdentically) {
    label(3, "SE identical across bf/pf/bpf");
    const std::vector<const SweepPoint*> bf = rows("bf");
    const std::vector<const SweepPoint*> pf = rows("pf");
    const std::vector<const SweepPoint*> bpf = rows("bpf");
    ASSERT_EQ(bf.size(), 21u);
    double worst = 0.0;
    for (std::size_t i = 0; i < 21; ++i) {
        worst = std::max(worst, std::abs(*bf[i]->se - *pf[i]->se));
        worst = std::max(worst, std::abs(*bf[i]->se - *bpf[i]->se));
    }
    EXPECT_LE(worst, 1e-3);
}

TEST_F(AcceptanceSuite, SavedEntanglementCurvesAreUnimodal) {
    label(4, "SE rises to a single peak then falls");
    for (const char* family : {"ad", "bf", "pf", "bpf"}) {
        const std::vector<const SweepPoint*> pts = rows(family);
        ASSERT_EQ(pts.size(), 21u);
        std::size_t peak = 0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (*pts[i]->se > *pts[peak]->se) peak = i;
        for (std::size_t i = 0; i + 1 <= peak; ++i)
            EXPECT_GE(*pts[i + 1]->se, *pts[i]->se - 1e-3)
                << family << " rising flank at p=" << pts[i]->p;
        for (std::size_t i = peak; i + 1 < pts.size(); ++i)
            EXPECT_LE(*pts[i + 1]->se, *pts[i]->se + 1e-3)
                << family << " falling flank at p=" << pts[i]->p;
    }
}

TEST_F(AcceptanceSuite, CapacityEndpointsAndMonotonicity) {
    label(5, "EC endpoints and decay");
    for (const char* family : {"ad", "bf", "bpf", "dc", "pf"}) {
        const std::vector<const SweepPoint*> pts = rows(family);
        ASSERT_EQ(pts.size(), 21u);
        EXPECT_NEAR(*pts.front()->ec, 1.0, 1e-6) << family;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            EXPECT_LE(*pts[i + 1]->ec, *pts[i]->ec + 1e-4)
                << family << " at p=" << pts[i]->p;
    }
    for (const char* family : {"ad", "bf", "pf", "bpf"})
        EXPECT_LE(*rows(family).back()->ec, 1e-6) << family;
}

TEST_F(AcceptanceSuite, StateDependenceClosedForms) {
    label(6, "CDS closed forms");
    for (const SweepPoint* pt : rows("ad"))
        EXPECT_NEAR(*pt->cds, std::sqrt(1.0 - pt->p) - (1.0 - pt->p), 1e-5) << "p=" << pt->p;
    for (const SweepPoint* pt : rows("bf"))
        EXPECT_NEAR(*pt->cds, pt->p, 1e-5) << "p=" << pt->p;
    for (const SweepPoint* pt : rows("dc")) EXPECT_LE(*pt->cds, 1e-8) << "p=" << pt->p;
}

TEST_F(AcceptanceSuite, DepolarizingIsCovariant) {
    label(7, "depolarizing covariance and flat SE objective");
    RandomStream rs(mix_seed(42, hash_label("acceptance-covariance")));
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const KrausChannel c = depolarizing(p);
        for (int i = 0; i < 200; ++i) {
            const ComplexMatrix u = random_unitary(rs);
            const DensityMatrix rho = density_from_pure(random_pure(2, rs));
            EXPECT_LE(covariance_defect(c, u, rho), 1e-10);
        }
    }
    for (double p : {0.37, 0.81}) {
        const KrausChannel doubled = tensor_square(depolarizing(p));
        for (int i = 0; i < 250; ++i) {
            const DensityMatrix rho = density_from_pure(random_pure(4, rs));
            const double v = se_objective(doubled, rho, random_unitary(rs));
            EXPECT_LE(std::abs(v), 1e-10);
        }
    }
}

TEST_F(AcceptanceSuite, BoundChainHoldsEverywhere) {
    label(8, "SE <= EB1 <= EB2, and EB1 = EB2 off the depolarizing family");
    for (const SweepPoint& pt : master) {
        EXPECT_LE(*pt.se, *pt.eb1 + 1e-6) << pt.family << " p=" << pt.p;
        EXPECT_LE(*pt.eb1, *pt.eb2 + 1e-6) << pt.family << " p=" << pt.p;
        if (pt.family != "dc")
            EXPECT_NEAR(*pt.eb1, *pt.eb2, 1e-4) << pt.family << " p=" << pt.p;
    }
}

TEST_F(AcceptanceSuite, IndependentOraclesAgree) {
    label(9, "Choi reconstruction and concurrence closed forms");
    RandomStream rs(mix_seed(42, hash_label("acceptance-oracles")));
    for (const ChannelFamily& family : canonical_families()) {
        const KrausChannel c = family.make(0.62);
        const DensityMatrix choi = choi_state(c);
        for (int i = 0; i < 100; ++i) {
            const DensityMatrix rho = density_from_pure(random_pure(2, rs));
            EXPECT_LE(max_abs_diff(choi_apply(choi, 2, rho).matrix(), apply(c, rho).matrix()),
                      1e-10)
                << family.label;
        }
    }
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const DensityMatrix out = local_apply(phase_flip(p), density_from_pure(bell_phi_plus()));
        EXPECT_NEAR(concurrence(out), (1.0 - p) * (1.0 - p), 1e-10) << "p=" << p;
    }
    for (double w : {0.0, 0.2, 1.0 / 3.0, 0.6, 1.0}) {
        ComplexMatrix m = density_from_pure(bell_phi_plus()).matrix();
        m *= Complex(w);
        m += ((1.0 - w) / 4.0) * ComplexMatrix::identity(4);
        EXPECT_NEAR(concurrence(DensityMatrix(std::move(m))),
                    std::max(0.0, (3.0 * w - 1.0) / 2.0), 1e-8)
            << "w=" << w;
    }
}

TEST_F(AcceptanceSuite, FullSweepIsReproducibleAndTimely) {
    label(10, "byte-identical rerun within the time budget");
    EXPECT_LE(master_ms, 30 * 60 * 1000) << "master sweep took " << master_ms << " ms";
    const std::vector<SweepPoint> again = run_sweep(master_config());
    EXPECT_EQ(emit_csv(again), master_csv);
}
