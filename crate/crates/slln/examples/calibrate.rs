//! Scratch calibration harness for the block-sum classifier: prints fitted
//! (kappa, lambda) per window choice for the battery and for the real
//! spec-driven probe terms. Not part of the deliverable behavior; used to
//! pick thresholds once.

use slln::criteria::{qp_series_numeric, truncmean_series_numeric, ProbeOptions};
use slln::rational::rat;
use slln::tailmodel::{ex4_2, ex4_3, logpower, pareto};

fn fit(blocks: &[f64], j_lo: usize, j_hi: usize) -> (f64, f64, f64) {
    // ln B_j = c - kappa ln j - lambda lnln j over j in [j_lo, j_hi]
    let pts: Vec<(f64, f64, f64)> = (j_lo..=j_hi)
        .filter(|&j| blocks[j - 1] > 0.0)
        .map(|j| ((j as f64).ln(), (j as f64).ln().ln(), blocks[j - 1].ln()))
        .collect();
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for &(x1, x2, y) in &pts {
        let row = [1.0, -x1, -x2];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += row[i] * row[j];
            }
            b[i] += row[i] * y;
        }
    }
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 3];
    for i in (0..3).rev() {
        let mut s = b[i];
        for k in (i + 1)..3 {
            s -= a[i][k] * x[k];
        }
        x[i] = s / a[i][i];
    }
    let jbar = (j_lo as f64 * j_hi as f64).sqrt();
    (x[1], x[2], x[1] + x[2] / jbar.ln())
}

fn show(name: &str, truth: &str, blocks: &[f64]) {
    let j = blocks.len();
    for (lo, label) in [(j - 11, "w12"), (j * 2 / 5, "w-long"), (4, "w-full")] {
        let lo = lo.max(3);
        let (k, l, z) = fit(blocks, lo, j);
        print!("  [{label}:{lo}-{j}] k={k:+.3} l={l:+.3} z={z:+.3}");
    }
    println!("   <= {name} [{truth}]");
}

fn anchored(name: &str, truth: &str, blocks: &[f64], anchor: &[f64]) {
    // fit ln(B_j/A_j) = c + s1 ln v_j + s2 lnln v_j, v_j = j ln 2, over the tail window
    let j = blocks.len().min(anchor.len());
    for lo in [j - 11, j * 2 / 5] {
        let lo = lo.max(5);
        let pts: Vec<(f64, f64, f64)> = (lo..=j)
            .filter(|&i| blocks[i - 1] > 0.0 && anchor[i - 1] > 0.0)
            .map(|i| {
                let v = i as f64 * std::f64::consts::LN_2;
                (v.ln(), v.ln().ln(), (blocks[i - 1] / anchor[i - 1]).ln())
            })
            .collect();
        if pts.len() < 6 {
            print!("  [a:{lo}-{j}] too few");
            continue;
        }
        let mut a = [[0.0f64; 3]; 3];
        let mut b = [0.0f64; 3];
        for &(x1, x2, y) in &pts {
            let row = [1.0, x1, x2];
            for i in 0..3 {
                for k in 0..3 {
                    a[i][k] += row[i] * row[k];
                }
                b[i] += row[i] * y;
            }
        }
        for col in 0..3 {
            let piv = (col..3)
                .max_by(|&i, &k| a[i][col].abs().partial_cmp(&a[k][col].abs()).unwrap())
                .unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            for rw in (col + 1)..3 {
                let f = a[rw][col] / a[col][col];
                for k in col..3 {
                    a[rw][k] -= f * a[col][k];
                }
                b[rw] -= f * b[col];
            }
        }
        let mut x = [0.0f64; 3];
        for i in (0..3).rev() {
            let mut ss = b[i];
            for k in (i + 1)..3 {
                ss -= a[i][k] * x[k];
            }
            x[i] = ss / a[i][i];
        }
        print!("  [a:{lo}-{j}] s1={:+.3} s2={:+.3}", x[1], x[2]);
    }
    println!("   <= {name} [{truth}] anchored");
}

fn main() {
    let opts = ProbeOptions::default(); // J = 24
    println!("=== clean battery (J=24) ===");
    let cases: Vec<(&str, &str, Box<dyn Fn(f64) -> f64>)> = vec![
        ("1/n^2", "C", Box::new(|n: f64| n.powi(-2))),
        ("1/n", "D", Box::new(|n: f64| 1.0 / n)),
        ("1/(n ln n)", "D", Box::new(|n: f64| 1.0 / (n * n.ln()))),
        ("1/(n ln^2 n)", "C", Box::new(|n: f64| 1.0 / (n * n.ln() * n.ln()))),
        (
            "(1,1,1)",
            "D",
            Box::new(|n: f64| if n > 16.0 { 1.0 / (n * n.ln() * n.ln().ln()) } else { 0.0 }),
        ),
        (
            "(1,1,2)",
            "C",
            Box::new(|n: f64| {
                if n > 16.0 {
                    1.0 / (n * n.ln() * n.ln().ln().powi(2))
                } else {
                    0.0
                }
            }),
        ),
        (
            "(1,3/2,-1)",
            "C",
            Box::new(|n: f64| {
                if n > 16.0 {
                    n.ln().ln() / (n * n.ln().powf(1.5))
                } else {
                    0.0
                }
            }),
        ),
        (
            "(1,3/4,0)",
            "D",
            Box::new(|n: f64| if n > 2.0 { 1.0 / (n * n.ln().powf(0.75)) } else { 0.0 }),
        ),
        (
            "(1,5/4,0)",
            "C?",
            Box::new(|n: f64| if n > 2.0 { 1.0 / (n * n.ln().powf(1.25)) } else { 0.0 }),
        ),
        (
            "(1,0,5)",
            "D",
            Box::new(|n: f64| if n > 16.0 { 1.0 / (n * n.ln().ln().powi(5)) } else { 0.0 }),
        ),
        ("(0.9,0,0)", "D", Box::new(|n: f64| n.powf(-0.9))),
        ("(1.1,0,0)", "C", Box::new(|n: f64| n.powf(-1.1))),
    ];
    for (name, truth, f) in &cases {
        let probe = slln::criteria::classify_partial_sums(f, name, &opts).unwrap();
        show(name, truth, &probe.block_sums);
    }

    println!("=== real qp-series probes (J=24) ===");
    let e42 = ex4_2(rat(3, 2)).unwrap();
    let probe = qp_series_numeric(&e42, rat(3, 2), &opts).unwrap();
    show("ex4_2 qp", "D", &probe.block_sums);
    // family members with tail index = p and log exponents (a, b)
    let members = [
        ((rat(1, 1), rat(2, 1)), "D"),
        ((rat(1, 1), rat(3, 1)), "C"),
        ((rat(3, 2), rat(0, 1)), "C"),
    ];
    for ((a, b), truth) in members {
        let spec = logpower(rat(3, 2), a, b).unwrap();
        let probe = qp_series_numeric(&spec, rat(3, 2), &opts).unwrap();
        show(&format!("qp logpower(a={a}, b={b})"), truth, &probe.block_sums);
    }

    println!("=== anchored qp comparisons (J=24) ===");
    let anchor = qp_series_numeric(&logpower(rat(3, 2), rat(1, 1), rat(2, 1)).unwrap(), rat(3, 2), &opts)
        .unwrap()
        .block_sums;
    let probe = qp_series_numeric(&e42, rat(3, 2), &opts).unwrap();
    anchored("ex4_2 qp", "D", &probe.block_sums, &anchor);
    for ((a, b), truth) in members {
        let spec = logpower(rat(3, 2), a, b).unwrap();
        let probe = qp_series_numeric(&spec, rat(3, 2), &opts).unwrap();
        anchored(&format!("qp logpower(a={a}, b={b})"), truth, &probe.block_sums, &anchor);
    }
    let pc0 = pareto(rat(5, 2), true).unwrap();
    let probe = qp_series_numeric(&pc0, rat(3, 2), &opts).unwrap();
    anchored("pareto(5/2)c qp", "C", &probe.block_sums, &anchor);
    // another p, another anchor: p = 8/5 with ex4_1-like member (a=5/4 > 1: C)
    let opts2 = ProbeOptions::default();
    let anchor2 = qp_series_numeric(&logpower(rat(8, 5), rat(1, 1), rat(2, 1)).unwrap(), rat(8, 5), &opts2)
        .unwrap()
        .block_sums;
    let m2 = logpower(rat(8, 5), rat(5, 4), rat(0, 1)).unwrap();
    let probe = qp_series_numeric(&m2, rat(8, 5), &opts2).unwrap();
    anchored("qp logpower(p=8/5, a=5/4, b=0)", "C", &probe.block_sums, &anchor2);

    println!("=== real truncmean probes (J=24) ===");
    let e43 = ex4_3().unwrap();
    for q in [rat(3, 2), rat(2, 1), rat(3, 1)] {
        let probe = truncmean_series_numeric(&e43, q, &opts).unwrap();
        show(&format!("ex4_3 truncmean q={q}"), "D", &probe.block_sums);
    }
    let pc = pareto(rat(5, 2), true).unwrap();
    let probe = truncmean_series_numeric(&pc, rat(2, 1), &opts).unwrap();
    show("pareto(5/2)c truncmean q=2", "C", &probe.block_sums);

    println!("=== J=40 battery (sanity at larger range) ===");
    let opts40 = ProbeOptions { j_max: 40, ..ProbeOptions::default() };
    for (name, truth, f) in &cases {
        let probe = slln::criteria::classify_partial_sums(f, name, &opts40).unwrap();
        show(name, truth, &probe.block_sums);
    }
}
