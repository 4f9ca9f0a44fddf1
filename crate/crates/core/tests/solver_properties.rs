use dkg_core::solver::{
    charge, init_state, rough_data, rough_field, run, smooth_data, DKGState, GridSpec1D, SolverConfig, Splitting,
    Stepper,
};
use dkg_core::spinor::Spinor;
use num_complex::Complex64;
use proptest::prelude::*;

fn smooth_state(n: usize, extent: f64) -> DKGState {
    let g = GridSpec1D::new(n, extent).unwrap();
    let (psi, phi0, phi1) = smooth_data(&g);
    init_state(&psi, &phi0, &phi1, 1.0, 1.0, g).unwrap()
}

fn self_convergence_order(splitting: Splitting) -> f64 {
    let base = smooth_state(256, 64.0);
    let stepper = Stepper::new(base.grid).unwrap();
    let sols: Vec<_> = [20, 40, 80]
        .iter()
        .map(|&n| {
            let mut s = base.clone();
            stepper.advance(&mut s, 1.0 / n as f64, n, splitting);
            s
        })
        .collect();
    (sols[0].max_abs_diff(&sols[1]) / sols[1].max_abs_diff(&sols[2])).log2()
}

#[test]
fn lie_is_first_order() {
    let order = self_convergence_order(Splitting::Lie);
    assert!((order - 1.0).abs() <= 0.2, "Lie order {order}");
}

#[test]
fn strang_is_second_order() {
    let order = self_convergence_order(Splitting::Strang);
    assert!((order - 2.0).abs() <= 0.2, "Strang order {order}");
}

/// Narrow Gaussian data, resolved on every grid used below.
fn analytic_state(n: usize) -> DKGState {
    let g = GridSpec1D::new(n, 64.0).unwrap();
    let w = 2.0 * 0.35f64.powi(2);
    let bump = |x: f64| (-x * x / w).exp();
    let psi: Vec<Spinor> = g
        .xs()
        .iter()
        .map(|&x| Spinor::new(Complex64::from_polar(bump(x), x), Complex64::new(0.5 * bump(x - 0.5), 0.0)))
        .collect();
    let phi0: Vec<f64> = g.xs().iter().map(|&x| 0.5 * bump(x)).collect();
    init_state(&psi, &phi0, &vec![0.0; n], 1.0, 1.0, g).unwrap()
}

fn evolve(mut st: DKGState, dt: f64, steps: usize) -> DKGState {
    Stepper::new(st.grid).unwrap().advance(&mut st, dt, steps, Splitting::Strang);
    st
}

/// Max difference on the coarse nodes, which every finer grid contains.
fn coarse_error(coarse: &DKGState, fine: &DKGState) -> f64 {
    let k = fine.grid.n_x / coarse.grid.n_x;
    let mut err = 0.0f64;
    for j in 0..coarse.grid.n_x {
        let f = j * k;
        err = err
            .max((coarse.psi_plus[j] - fine.psi_plus[f]).norm())
            .max((coarse.psi_minus[j] - fine.psi_minus[f]).norm())
            .max((coarse.phi[j] - fine.phi[f]).abs())
            .max((coarse.phi_t[j] - fine.phi_t[f]).abs());
    }
    err
}

#[test]
fn spatial_convergence_is_spectral() {
    let (dt, steps) = (1.0 / 128.0, 64);
    let reference = evolve(analytic_state(2048), dt, steps);
    let e256 = coarse_error(&evolve(analytic_state(256), dt, steps), &reference);
    let e512 = coarse_error(&evolve(analytic_state(512), dt, steps), &reference);
    assert!(e256 > 0.0 && e256 / e512.max(1e-300) > 1e3, "errors {e256:e} at 256, {e512:e} at 512");
}

#[test]
fn smooth_run_keeps_charge_column_constant() {
    let st0 = smooth_state(1024, 64.0);
    let mut cfg = SolverConfig::new(st0.grid, 1.0);
    cfg.s = 0.0;
    cfg.r = 0.5;
    let mut st = st0.clone();
    let diags = run(&cfg, &mut st).unwrap();
    assert_eq!(diags.len(), cfg.schedule().len() + 1);
    assert!((diags.last().unwrap().t - 1.0).abs() < 1e-12);
    let c0 = diags[0].charge;
    assert!(diags.iter().all(|d| (d.charge - c0).abs() <= 1e-10 * c0));
    // at H^0 the spinor column is the charge itself
    assert!(diags.iter().all(|d| (d.hs_psi - d.charge).abs() <= 1e-12 * c0));
}

#[test]
fn rough_run_completes() {
    let (s, r) = (-0.2, 0.3);
    let g = GridSpec1D::new(4096, 64.0).unwrap();
    let psi = rough_data(s, 11, &g);
    let phi0 = rough_field(r, 11, &g);
    let phi1 = rough_field(r - 1.0, 12, &g);
    let mut st = init_state(&psi, &phi0, &phi1, 1.0, 1.0, g).unwrap();
    let mut cfg = SolverConfig::new(g, 0.5);
    cfg.s = s;
    cfg.r = r;
    cfg.diagnostics_every = 64;
    let diags = run(&cfg, &mut st).unwrap();
    assert!(st.is_finite());
    assert!((diags[0].hs_psi - 1.0).abs() < 1e-12);
    let c0 = diags[0].charge;
    assert!(diags.iter().all(|d| d.charge.is_finite() && (d.charge - c0).abs() <= 1e-10 * c0));
}

/// A few Gaussian packets with random centres, widths, amplitudes and
/// carrier frequencies.
#[derive(Debug, Clone)]
struct Packet {
    centre: f64,
    width: f64,
    amp: [f64; 4],
    carrier: f64,
}

fn packet() -> impl Strategy<Value = Packet> {
    (-6.0..6.0f64, 0.5..2.0f64, prop::array::uniform4(-1.0..1.0f64), -3.0..3.0f64)
        .prop_map(|(centre, width, amp, carrier)| Packet { centre, width, amp, carrier })
}

fn packet_state(packets: &[Packet], masses: (f64, f64)) -> DKGState {
    let g = GridSpec1D::new(128, 32.0).unwrap();
    let xs = g.xs();
    let env = |p: &Packet, x: f64| (-((x - p.centre) / p.width).powi(2)).exp();
    let psi: Vec<Spinor> = xs
        .iter()
        .map(|&x| {
            packets.iter().fold(Spinor::default(), |acc, p| {
                let e = Complex64::from_polar(env(p, x), p.carrier * x);
                acc + Spinor::new(e * p.amp[0], e * p.amp[1])
            })
        })
        .collect();
    let phi0: Vec<f64> = xs.iter().map(|&x| packets.iter().map(|p| p.amp[2] * env(p, x)).sum()).collect();
    let phi1: Vec<f64> = xs.iter().map(|&x| packets.iter().map(|p| p.amp[3] * env(p, x)).sum()).collect();
    init_state(&psi, &phi0, &phi1, masses.0, masses.1, g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn charge_is_conserved(packets in prop::collection::vec(packet(), 1..4), m in 0.0..2.0f64, kg in 0.0..2.0f64) {
        let st0 = packet_state(&packets, (m, kg));
        let c0 = charge(&st0);
        prop_assume!(c0 > 1e-6);
        let st = evolve(st0.clone(), st0.grid.dx() / 2.0, 400);
        prop_assert!((charge(&st) - c0).abs() <= 1e-10 * c0);
    }

    #[test]
    fn strang_round_trip(packets in prop::collection::vec(packet(), 1..4), m in 0.0..2.0f64) {
        let st0 = packet_state(&packets, (m, 1.0));
        prop_assume!(st0.max_abs() > 1e-6);
        let dt = st0.grid.dx() / 2.0;
        let back = evolve(evolve(st0.clone(), dt, 100), -dt, 100);
        prop_assert!(back.max_abs_diff(&st0) <= 1e-12 * st0.max_abs());
    }

    #[test]
    fn charge_is_homogeneous(packets in prop::collection::vec(packet(), 1..3), c in -3.0..3.0f64) {
        let st = packet_state(&packets, (1.0, 1.0));
        let mut scaled = st.clone();
        for v in scaled.psi_plus.iter_mut().chain(scaled.psi_minus.iter_mut()) {
            *v *= c;
        }
        prop_assert!((charge(&scaled) - c.abs() * charge(&st)).abs() <= 1e-12 * (1.0 + charge(&st)));
    }

    #[test]
    fn upper_range_stays_decoupled(centre in -4.0..4.0f64, width in 0.5..2.0f64, carrier in -3.0..3.0f64) {
        let g = GridSpec1D::new(128, 32.0).unwrap();
        let mut st = DKGState::zeros(g, 0.0, 1.0);
        st.psi_plus = g.xs().iter().map(|&x| Complex64::from_polar((-((x - centre) / width).powi(2)).exp(), carrier * x)).collect();
        let st = evolve(st, g.dx() / 2.0, 200);
        prop_assert!(st.psi_minus.iter().all(|v| *v == Complex64::default()));
        prop_assert!(st.phi.iter().chain(&st.phi_t).all(|v| *v == 0.0));
    }
}
