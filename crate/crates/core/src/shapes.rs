//! Small standard chains: the unit segment and unit cube in `H^1`, and a horizontal square
//! in `H^2`.

use num_traits::Signed;

use crate::currents::{Simplex, SimplicialCurrent, DEFAULT_QUADRATURE_ORDER};
use crate::heis::{HeisParams, Point};
use crate::linalg::Matrix;
use crate::scalar::{q_int, Q};

fn point(params: HeisParams, coords: &[i64]) -> Point<Q> {
    Point::from_coords(params, &coords.iter().map(|c| q_int(*c)).collect::<Vec<_>>()).expect("dimension")
}

/// The segment from the origin to `(1, 0, 0)` in `H^1`.
pub fn unit_segment() -> SimplicialCurrent {
    let p = HeisParams::new(1).expect("n = 1");
    SimplicialCurrent::new(
        p,
        1,
        vec![Simplex::new(vec![point(p, &[0, 0, 0]), point(p, &[1, 0, 0])], q_int(1))],
        DEFAULT_QUADRATURE_ORDER,
    )
    .expect("valid chain")
}

/// The unit cube `[0,1]^3` in `H^1` as six positively oriented Kuhn tetrahedra.
pub fn unit_cube() -> SimplicialCurrent {
    let p = HeisParams::new(1).expect("n = 1");
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut simplices = Vec::new();
    for perm in perms {
        let mut corner = [0i64; 3];
        let mut vertices = vec![point(p, &corner)];
        for axis in perm {
            corner[axis] = 1;
            vertices.push(point(p, &corner));
        }
        let mut s = Simplex::new(vertices, q_int(1));
        if orientation_det(&s).is_negative() {
            s.vertices.swap(2, 3);
        }
        simplices.push(s);
    }
    SimplicialCurrent::new(p, 3, simplices, DEFAULT_QUADRATURE_ORDER).expect("valid chain")
}

/// The square `[0,1]^2` in the plane `y = 0, t = 0` of `H^2`, oriented by `X_1 ^ X_2`.
pub fn horizontal_square() -> SimplicialCurrent {
    let p = HeisParams::new(2).expect("n = 2");
    let v = |x1, x2| point(p, &[x1, x2, 0, 0, 0]);
    SimplicialCurrent::new(
        p,
        2,
        vec![
            Simplex::new(vec![v(0, 0), v(1, 0), v(1, 1)], q_int(1)),
            Simplex::new(vec![v(0, 0), v(1, 1), v(0, 1)], q_int(1)),
        ],
        DEFAULT_QUADRATURE_ORDER,
    )
    .expect("valid chain")
}

/// The square `[0,1]^2` in the plane `y = 0` of `H^1`, a 2-current of the middle degree plus one.
pub fn vertical_square() -> SimplicialCurrent {
    let p = HeisParams::new(1).expect("n = 1");
    let v = |x, t| point(p, &[x, 0, t]);
    SimplicialCurrent::new(
        p,
        2,
        vec![
            Simplex::new(vec![v(0, 0), v(1, 0), v(1, 1)], q_int(1)),
            Simplex::new(vec![v(0, 0), v(1, 1), v(0, 1)], q_int(1)),
        ],
        DEFAULT_QUADRATURE_ORDER,
    )
    .expect("valid chain")
}

fn orientation_det(s: &Simplex) -> Q {
    let m = Matrix::from_columns(3, &s.edges());
    let g = |i, j| m.get(i, j).clone();
    g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
        + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
}
