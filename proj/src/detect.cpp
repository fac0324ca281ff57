#include "gpofdm/detect.hpp"

namespace gpofdm {

ZfResult zf_detect(std::span<const cplx> y_freq, std::span<const cplx> h_freq) {
    if (y_freq.size() != h_freq.size())
        throw std::invalid_argument("zf_detect: received and channel vectors differ in length");
    ZfResult r;
    r.symbols.resize(y_freq.size());
    for (std::size_t k = 0; k < y_freq.size(); ++k) {
        if (std::abs(h_freq[k]) < kZfNullThreshold) {
            r.symbols[k] = cplx{};
            r.null_bins.push_back(k);
        } else {
            r.symbols[k] = y_freq[k] / h_freq[k];
        }
    }
    return r;
}

ZpDetector::ZpDetector(const ChannelRealization& h, std::size_t n, ZpWindow window)
    : n_(n), window_(window) {
    ComplexMatrix hzp = build_zp_matrix(h.taps, n);
    if (window == ZpWindow::Stripped) {
        ComplexMatrix top = hzp.topRows(static_cast<Eigen::Index>(n));
        pinv_ = pseudoinverse(top);
    } else {
        pinv_ = pseudoinverse(hzp);
    }
    equalizer_ = dft_matrix(n) * pinv_;
}

ComplexSequence ZpDetector::detect(std::span<const cplx> y) const {
    const auto len = input_length();
    if (y.size() < len)
        throw std::invalid_argument("ZpDetector: expected at least " + std::to_string(len) +
                                    " samples, got " + std::to_string(y.size()));
    Eigen::Map<const Eigen::VectorXcd> yv(y.data(), static_cast<Eigen::Index>(len));
    Eigen::VectorXcd x = equalizer_ * yv;
    return ComplexSequence(x.data(), x.data() + x.size());
}

ComplexSequence zp_detect(std::span<const cplx> y, const ChannelRealization& h, std::size_t n) {
    if (y.size() == n) return ZpDetector(h, n, ZpWindow::Stripped).detect(y);
    if (y.size() >= n + h.length() - 1) return ZpDetector(h, n, ZpWindow::Full).detect(y);
    throw std::invalid_argument("zp_detect: input must hold n or at least n+L-1 samples");
}

}  // namespace gpofdm
