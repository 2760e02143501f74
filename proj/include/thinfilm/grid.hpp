#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace thinfilm {

/// Dense 2D scalar field stored x-fastest: index = i + nx * j.
class Field2 {
public:
    Field2() = default;
    Field2(int nx, int ny, double value = 0.0)
        : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), value) {
        if (nx < 0 || ny < 0) {
            throw std::invalid_argument("Field2: negative extent");
        }
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int i, int j) { return data_[index(i, j)]; }
    double operator()(int i, int j) const { return data_[index(i, j)]; }

    /// Periodic access; any integer index is wrapped onto the grid.
    double wrapped(int i, int j) const {
        return (*this)(((i % nx_) + nx_) % nx_, ((j % ny_) + ny_) % ny_);
    }

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx_) * static_cast<std::size_t>(j);
    }

    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double mean() const {
        if (data_.empty()) return 0.0;
        return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
    }
    double min() const { return *std::min_element(data_.begin(), data_.end()); }
    double max() const { return *std::max_element(data_.begin(), data_.end()); }

    void subtract_mean() {
        const double m = mean();
        for (double& v : data_) v -= m;
    }

    friend bool operator==(const Field2&, const Field2&) = default;

private:
    int nx_ = 0;
    int ny_ = 0;
    std::vector<double> data_;
};

}  // namespace thinfilm
