use wrlat_core::catalog::{root_lattice, RootFamily};
use wrlat_core::linalg::{IntMatrix, RatMatrix};
use wrlat_core::minvec::minimal_vectors;
use wrlat_core::{Int, Rat};

fn main() {
    for (name, g) in [
        ("Z2", wrlat_core::GramMatrix::from_int_rows(&[vec![1, 0], vec![0, 1]]).unwrap()),
        ("A3", root_lattice(RootFamily::A, 3).unwrap()),
        ("D4", root_lattice(RootFamily::D, 4).unwrap()),
    ] {
        let n = g.dim();
        let mv = minimal_vectors(&g);
        let s = mv.s();
        // naive: all full-rank subsets, rational coordinates of all vectors
        let mut subset: Vec<usize> = Vec::new();
        let mut worst: Option<(Vec<usize>, Vec<i64>, String)> = None;
        fn go(
            mv: &wrlat_core::MinimalVectorSet,
            n: usize,
            start: usize,
            subset: &mut Vec<usize>,
            worst: &mut Option<(Vec<usize>, Vec<i64>, String)>,
        ) {
            if worst.is_some() {
                return;
            }
            if subset.len() == n {
                let rows: Vec<Vec<Rat>> = subset
                    .iter()
                    .map(|&i| {
                        mv.vectors[i].iter().map(|&v| Rat::from_integer(Int::from(v))).collect()
                    })
                    .collect();
                let m = RatMatrix::from_rows(rows);
                let Some(inv) = m.inverse() else { return };
                for x in &mv.vectors {
                    let mut alpha = vec![Rat::from_integer(0.into()); n];
                    for j in 0..n {
                        for k in 0..n {
                            let t = &alpha[j] + inv.at(k, j) * Rat::from_integer(Int::from(x[k]));
                            alpha[j] = t;
                        }
                    }
                    let one = Rat::from_integer(1.into());
                    if alpha.iter().any(|a| a > &one || *a < -&one) {
                        *worst = Some((
                            subset.clone(),
                            x.clone(),
                            alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","),
                        ));
                        return;
                    }
                }
                return;
            }
            for idx in start..mv.s() {
                subset.push(idx);
                go(mv, n, idx + 1, subset, worst);
                subset.pop();
            }
        }
        go(&mv, n, 0, &mut subset, &mut worst);
        let _ = s;
        match worst {
            None => println!("{name}: all coordinates within [-1,1]"),
            Some((b, x, a)) => {
                println!("{name}: VIOLATION basis {b:?} vector {x:?} alpha [{a}]");
                for &i in &b {
                    println!("   basis row: {:?}", mv.vectors[i]);
                }
            }
        }
    }
}
