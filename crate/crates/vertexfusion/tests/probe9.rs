use std::sync::Arc;
use vertexfusion::affine::{induce, LowestSpace};
use vertexfusion::fusion::*;
use vertexfusion::liealg::{build_sl, WeightModule};
use vertexfusion::rng::SeededRng;
use vertexfusion::scalar::Scalar;

#[test]
fn probe_criterion10_descendants() {
    let g = Arc::new(build_sl(2).unwrap());
    let kappa = Scalar::from_int(-1);
    let v = Arc::new(
        induce(g.clone(), LowestSpace::plain(WeightModule::trivial(&g)), kappa.clone(), 4).unwrap(),
    );
    let pw = Arc::new(PairWindow::new(v.clone(), v.clone(), Scalar::one(), 2).unwrap());
    let fc = FusionContexts::new(pw.clone(), v, kappa).unwrap();
    let mut rng = SeededRng::new(77);
    let d = 2usize;
    let space = compute_hboxtr(&fc, d).unwrap();
    println!("space dims {:?}", space.dims());
    let cap = d as u32 + 2;
    let mut checked = 0;
    let mut failed = 0;
    for trial in 0..8 {
        let lam = sample_space_member(&pw, &space, d, &mut rng);
        for ua in 0..3usize {
            for vb in 0..3usize {
                let ustate = fc.generator_state(ua);
                let vstate = fc.generator_state(vb);
                let Some(n1) = slt_witness(&fc, &lam, &ustate, cap).unwrap() else { continue };
                let Some(n2) = slt_witness(&fc, &lam, &vstate, cap).unwrap() else { continue };
                // K: largest n with u_n v != 0, plus one
                let mut big_k = 0i64;
                for n in (0..=3i64).rev() {
                    let uv = fc.ctx1.state_mode_apply(&ustate, n, &vstate).unwrap();
                    if !uv.is_zero() {
                        big_k = n + 1;
                        break;
                    }
                }
                for k in -2..big_k.max(1) {
                    let uv = fc.ctx1.state_mode_apply(&ustate, k, &vstate).unwrap();
                    if uv.is_zero() {
                        continue;
                    }
                    let bound = slt_descendant_bound(n1, n2, big_k, k);
                    let ok = check_slt(&fc, &lam, &uv, bound).unwrap();
                    checked += 1;
                    if !ok {
                        failed += 1;
                        println!("FAIL trial {trial} u {ua} v {vb} k {k} N1 {n1} N2 {n2} K {big_k} bound {bound}");
                    }
                }
            }
        }
    }
    println!("descendant checks: {checked} checked, {failed} failed");
    assert_eq!(failed, 0);
}
