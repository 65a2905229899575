/**
 * @file fft3d.hpp
 * @brief Thin RAII wrapper around FFTW for in-place 3D complex transforms.
 */
#pragma once

#include <gci/core.hpp>

#include <fftw3.h>

#include <complex>
#include <memory>
#include <mutex>
#include <span>

namespace gci {

/// FFTW-aligned complex buffer.
class FftBuffer {
public:
    explicit FftBuffer(std::size_t size)
        : data_(reinterpret_cast<Complex*>(fftw_malloc(sizeof(Complex) * size))), size_(size) {
        if (!data_) throw std::bad_alloc();
        std::fill(data_, data_ + size_, Complex{});
    }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;
    FftBuffer(FftBuffer&& o) noexcept : data_(o.data_), size_(o.size_) {
        o.data_ = nullptr;
        o.size_ = 0;
    }
    FftBuffer& operator=(FftBuffer&& o) noexcept {
        std::swap(data_, o.data_);
        std::swap(size_, o.size_);
        return *this;
    }
    ~FftBuffer() {
        if (data_) fftw_free(data_);
    }

    Complex* data() { return data_; }
    const Complex* data() const { return data_; }
    std::size_t size() const { return size_; }
    Complex& operator[](std::size_t i) { return data_[i]; }
    const Complex& operator[](std::size_t i) const { return data_[i]; }
    std::span<Complex> span() { return {data_, size_}; }

private:
    Complex* data_;
    std::size_t size_;
};

/// In-place forward/backward plans for an m x m x m grid. Planning is
/// serialized; execution on distinct aligned buffers is thread-safe.
class Fft3d {
public:
    explicit Fft3d(int m) : m_(m), size_(static_cast<std::size_t>(m) * m * m) {
        static std::mutex planner_mutex;
        std::lock_guard lock(planner_mutex);
        FftBuffer scratch(size_);
        auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
        forward_ = fftw_plan_dft_3d(m, m, m, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_3d(m, m, m, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!forward_ || !backward_) throw Error(ErrorCode::InvalidConfig, "FFTW planning failed");
    }
    Fft3d(const Fft3d&) = delete;
    Fft3d& operator=(const Fft3d&) = delete;
    ~Fft3d() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    int extent() const { return m_; }
    std::size_t size() const { return size_; }

    void forward(FftBuffer& buf) const { run(forward_, buf); }
    /// Unnormalized inverse: forward then backward scales by size().
    void backward(FftBuffer& buf) const { run(backward_, buf); }

private:
    void run(fftw_plan plan, FftBuffer& buf) const {
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        fftw_execute_dft(plan, p, p);
    }

    int m_;
    std::size_t size_;
    fftw_plan forward_{};
    fftw_plan backward_{};
};

}  // namespace gci
