#include "swpm/eigen3.hpp"

#include <algorithm>
#include <cmath>

namespace swpm {

namespace {

double offDiagonalNorm(const Mat3& m) {
    double s = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
    return std::sqrt(2.0 * s);
}

// One Jacobi rotation zeroing a(p,q); accumulates the rotation into v.
void rotate(Mat3& a, Mat3& v, int p, int q) {
    double apq = a(p, q);
    if (apq == 0.0) return;
    double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    double t = (theta >= 0.0 ? 1.0 : -1.0) /
               (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    double c = 1.0 / std::sqrt(t * t + 1.0);
    double s = t * c;

    for (int i = 0; i < 3; ++i) {
        double aip = a(i, p), aiq = a(i, q);
        a(i, p) = c * aip - s * aiq;
        a(i, q) = s * aip + c * aiq;
    }
    for (int j = 0; j < 3; ++j) {
        double apj = a(p, j), aqj = a(q, j);
        a(p, j) = c * apj - s * aqj;
        a(q, j) = s * apj + c * aqj;
    }
    for (int i = 0; i < 3; ++i) {
        double vip = v(i, p), viq = v(i, q);
        v(i, p) = c * vip - s * viq;
        v(i, q) = s * vip + c * viq;
    }
}

}  // namespace

EigenDecomposition eigenSymmetric3(const Mat3& m) {
    Mat3 a = m;
    // Symmetrize against accumulated round-off in the input.
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double avg = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = avg;
        }

    Mat3 v = Mat3::identity();
    double scale = std::max(std::abs(a.trace()), a.frobeniusNorm());
    double tol = 1e-13 * std::max(scale, 1e-300);
    for (int sweep = 0; sweep < 64 && offDiagonalNorm(a) > tol; ++sweep) {
        rotate(a, v, 0, 1);
        rotate(a, v, 0, 2);
        rotate(a, v, 1, 2);
    }

    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) > a(j, j); });

    EigenDecomposition out;
    for (int k = 0; k < 3; ++k) {
        int src = order[k];
        out.values[k] = a(src, src);
        Vec3 col{v(0, src), v(1, src), v(2, src)};
        double n = norm(col);
        if (n > 0.0) col = (1.0 / n) * col;
        // Sign convention: first component of magnitude above 1e-14 positive.
        for (int i = 0; i < 3; ++i) {
            if (std::abs(col[i]) > 1e-14) {
                if (col[i] < 0.0) col = -col;
                break;
            }
        }
        out.vectors[k] = col;
    }
    return out;
}

}  // namespace swpm
