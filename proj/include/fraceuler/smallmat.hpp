#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fraceuler {

using Vec = std::vector<double>;

/// Dense row-major matrix sized for state dimensions, not for bulk linear algebra.
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Mat identity(int d) {
        Mat m(d, d);
        for (int i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    Vec col(int j) const {
        Vec v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    Mat& operator+=(const Mat& o) {
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Mat& operator*=(double s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        Mat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Vec operator*(const Mat& a, const Vec& x) {
        Vec y(a.rows_, 0.0);
        for (int i = 0; i < a.rows_; ++i) {
            double s = 0.0;
            for (int j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    double norm_inf() const {
        double best = 0.0;
        for (int i = 0; i < rows_; ++i) {
            double row = 0.0;
            for (int j = 0; j < cols_; ++j) row += std::abs((*this)(i, j));
            best = std::max(best, row);
        }
        return best;
    }

    double max_abs() const {
        double best = 0.0;
        for (double x : data_) best = std::max(best, std::abs(x));
        return best;
    }

    /// Gauss-Jordan inverse with partial pivoting; throws on singular input.
    Mat inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("Mat::inverse: matrix not square");
        const int d = rows_;
        Mat a(*this);
        Mat inv = identity(d);
        for (int col = 0; col < d; ++col) {
            int piv = col;
            for (int r = col + 1; r < d; ++r)
                if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
            if (a(piv, col) == 0.0) throw std::runtime_error("Mat::inverse: singular matrix");
            if (piv != col) {
                for (int j = 0; j < d; ++j) {
                    std::swap(a(col, j), a(piv, j));
                    std::swap(inv(col, j), inv(piv, j));
                }
            }
            const double scale = 1.0 / a(col, col);
            for (int j = 0; j < d; ++j) {
                a(col, j) *= scale;
                inv(col, j) *= scale;
            }
            for (int r = 0; r < d; ++r) {
                if (r == col) continue;
                const double f = a(r, col);
                if (f == 0.0) continue;
                for (int j = 0; j < d; ++j) {
                    a(r, j) -= f * a(col, j);
                    inv(r, j) -= f * inv(col, j);
                }
            }
        }
        return inv;
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

inline void axpy(double a, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline double norm_inf(const Vec& v) {
    double best = 0.0;
    for (double x : v) best = std::max(best, std::abs(x));
    return best;
}

}  // namespace fraceuler
