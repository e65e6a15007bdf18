use tileregu_core::algebra::IntMatrix;
use tileregu_core::attractor::DilationSystem;
use tileregu_core::oracle::*;

fn main() {
    let cases: Vec<(&str, Vec<Vec<i64>>, Vec<Vec<i64>>)> = vec![
        ("ex20", vec![vec![3]], vec![vec![0], vec![1], vec![5]]),
        ("square", vec![vec![0, -2], vec![1, 0]], vec![vec![0, 0], vec![1, 0]]),
        ("dragon", vec![vec![1, 1], vec![-1, 1]], vec![vec![0, 0], vec![1, 0]]),
        ("bear", vec![vec![1, -2], vec![1, 0]], vec![vec![0, 0], vec![1, 0]]),
        ("qsierp", vec![vec![2, 0], vec![0, 2]], vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![-1, -1]]),
        ("fat", vec![vec![2]], vec![vec![0], vec![3]]),
        ("interval", vec![vec![2]], vec![vec![0], vec![1]]),
    ];
    for (name, m, d) in cases {
        let t0 = std::time::Instant::now();
        let sys = DilationSystem::new(IntMatrix::new(m).unwrap(), d, None, None).unwrap();
        let check = tile_check(&sys, None, None);
        println!("{name:10} {:?}  ({:.2?})", check, t0.elapsed());
    }
}
