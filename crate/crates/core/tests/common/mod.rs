//! Shared test oracles, independent of the implementation paths they check.

use chenricci_core::chart::ChartManifold;

/// Gauss curvature of a 2D chart via the Brioschi formula, with all metric
/// derivatives taken by plain central finite differences of `eval` (no jets,
/// no Christoffel/Riemann code).
pub fn brioschi_k(chart: &ChartManifold<f64>, p: &[f64]) -> f64 {
    let entry = |i: usize, j: usize, q: &[f64]| chart.metric[i][j].eval(q).unwrap();
    let h = 1e-4;
    let d1 = |i: usize, j: usize, k: usize, q: &[f64]| {
        let mut qp = q.to_vec();
        qp[k] += h;
        let mut qm = q.to_vec();
        qm[k] -= h;
        (entry(i, j, &qp) - entry(i, j, &qm)) / (2.0 * h)
    };
    let d2 = |i: usize, j: usize, k: usize, l: usize, q: &[f64]| {
        if k == l {
            let mut qp = q.to_vec();
            qp[k] += h;
            let mut qm = q.to_vec();
            qm[k] -= h;
            (entry(i, j, &qp) - 2.0 * entry(i, j, q) + entry(i, j, &qm)) / (h * h)
        } else {
            let mut qpp = q.to_vec();
            qpp[k] += h;
            qpp[l] += h;
            let mut qpm = q.to_vec();
            qpm[k] += h;
            qpm[l] -= h;
            let mut qmp = q.to_vec();
            qmp[k] -= h;
            qmp[l] += h;
            let mut qmm = q.to_vec();
            qmm[k] -= h;
            qmm[l] -= h;
            (entry(i, j, &qpp) - entry(i, j, &qpm) - entry(i, j, &qmp) + entry(i, j, &qmm))
                / (4.0 * h * h)
        }
    };
    let e = entry(0, 0, p);
    let f = entry(0, 1, p);
    let g = entry(1, 1, p);
    let e_u = d1(0, 0, 0, p);
    let e_v = d1(0, 0, 1, p);
    let g_u = d1(1, 1, 0, p);
    let g_v = d1(1, 1, 1, p);
    let f_u = d1(0, 1, 0, p);
    let f_v = d1(0, 1, 1, p);
    let e_vv = d2(0, 0, 1, 1, p);
    let g_uu = d2(1, 1, 0, 0, p);
    let f_uv = d2(0, 1, 0, 1, p);
    let m1 = [
        [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, e, f],
        [0.5 * g_v, f, g],
    ];
    let m2 = [[0.0, 0.5 * e_v, 0.5 * g_u], [0.5 * e_v, e, f], [0.5 * g_u, f, g]];
    let det3 = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let denom = e * g - f * f;
    (det3(&m1) - det3(&m2)) / (denom * denom)
}
