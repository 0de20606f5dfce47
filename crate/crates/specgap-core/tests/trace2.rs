use num_complex::Complex;
use specgap_core::solver::{solve_primal_from, continuation_solve, SolverOptions, StieltjesPair};
use specgap_core::spectrum::JointSpectrum;
type C64 = Complex<f64>;

#[test]
fn trace_level() {
    let h = JointSpectrum::from_atoms(&[(0.0, 1.0, 1.0)]).unwrap();
    let opts = SolverOptions::default();
    let y = 2.0;
    let x = 0.05;
    // solution at v = 0.03125 via continuation (worked per earlier probe)
    let warm = continuation_solve(x, 0.03125, y, &h, &opts).unwrap();
    println!("warm at v=3.125e-2: {:?}", warm.s);
    // try the next scheduled level with that warm start
    for v in [0.03, 0.027, 0.022, 0.018, 0.015625] {
        match solve_primal_from(C64::new(x, v), y, &h, &opts, warm) {
            Ok(p) => println!("v={v}: ok s={:?}", p.s),
            Err(e) => println!("v={v}: FAIL {e:?}"),
        }
    }
    // quadratic oracle at v=0.015625
    let z = C64::new(x, 0.015625);
    let a = 2.0 * z; let b = z + 1.0;
    let disc = (b * b - 4.0 * a).sqrt();
    let r1 = (-b + disc) / (2.0 * a);
    let r2 = (-b - disc) / (2.0 * a);
    println!("roots at v=1.5625e-2: {r1:?} {r2:?}");
}
