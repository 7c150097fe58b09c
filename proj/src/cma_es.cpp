#include "qd/cma_es.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "qd/errors.hpp"

namespace qd {

struct CmaEs::Impl {
    int n = 0;
    int lambda = 0;
    int mu = 0;
    Eigen::VectorXd weights;  // length mu, positive, sums to 1
    double mueff = 0.0;
    double c_sigma = 0.0, d_sigma = 0.0, c_c = 0.0, c_1 = 0.0, c_mu = 0.0;
    double chi_n = 0.0;

    Eigen::VectorXd mean;
    double sigma = 0.0;
    Eigen::MatrixXd C;
    Eigen::VectorXd p_c, p_sigma;
    Eigen::MatrixXd B;       // eigenbasis of C
    Eigen::VectorXd D;       // sqrt of eigenvalues
    long gen = 0;
    bool healthy = true;

    std::vector<Eigen::VectorXd> last_y;  // sampled steps of the last ask

    void decompose() {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(C);
        if (solver.info() != Eigen::Success) {
            healthy = false;
            B = Eigen::MatrixXd::Identity(n, n);
            D = Eigen::VectorXd::Ones(n);
            return;
        }
        B = solver.eigenvectors();
        D = solver.eigenvalues();
        for (int i = 0; i < n; ++i) {
            if (!(D[i] > 0.0) || !std::isfinite(D[i])) {
                healthy = false;
                D[i] = std::max(D[i], 1e-20);
            }
            D[i] = std::sqrt(D[i]);
        }
    }
};

CmaEs::CmaEs(int dim, int lambda, double sigma0, std::vector<double> mean0) : impl_(new Impl) {
    if (dim < 1 || lambda < 2) throw ConfigError("CMA-ES needs dim >= 1 and lambda >= 2");
    if (!(sigma0 > 0.0)) throw ConfigError("CMA-ES needs sigma0 > 0");
    if (static_cast<int>(mean0.size()) != dim) throw ConfigError("CMA-ES initial mean has wrong length");
    Impl& s = *impl_;
    s.n = dim;
    s.lambda = lambda;
    s.mu = lambda / 2;
    s.weights.resize(s.mu);
    for (int i = 0; i < s.mu; ++i) s.weights[i] = std::log(s.mu + 0.5) - std::log(i + 1.0);
    s.weights /= s.weights.sum();
    s.mueff = 1.0 / s.weights.squaredNorm();
    double n = dim;
    s.c_sigma = (s.mueff + 2.0) / (n + s.mueff + 5.0);
    s.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((s.mueff - 1.0) / (n + 1.0)) - 1.0) + s.c_sigma;
    s.c_c = (4.0 + s.mueff / n) / (n + 4.0 + 2.0 * s.mueff / n);
    s.c_1 = 2.0 / ((n + 1.3) * (n + 1.3) + s.mueff);
    s.c_mu = std::min(1.0 - s.c_1,
                      2.0 * (s.mueff - 2.0 + 1.0 / s.mueff) / ((n + 2.0) * (n + 2.0) + s.mueff));
    s.chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
    s.mean = Eigen::Map<Eigen::VectorXd>(mean0.data(), dim);
    s.sigma = sigma0;
    s.C = Eigen::MatrixXd::Identity(dim, dim);
    s.p_c = Eigen::VectorXd::Zero(dim);
    s.p_sigma = Eigen::VectorXd::Zero(dim);
    s.decompose();
}

CmaEs::CmaEs(CmaEs&&) noexcept = default;
CmaEs& CmaEs::operator=(CmaEs&&) noexcept = default;
CmaEs::~CmaEs() = default;

std::vector<std::vector<double>> CmaEs::ask(Rng& rng) {
    Impl& s = *impl_;
    s.decompose();
    s.last_y.assign(static_cast<std::size_t>(s.lambda), Eigen::VectorXd());
    std::vector<std::vector<double>> out(static_cast<std::size_t>(s.lambda));
    for (int i = 0; i < s.lambda; ++i) {
        Eigen::VectorXd z(s.n);
        for (int j = 0; j < s.n; ++j) z[j] = rng.normal();
        Eigen::VectorXd y = s.B * (s.D.cwiseProduct(z));
        s.last_y[static_cast<std::size_t>(i)] = y;
        Eigen::VectorXd x = s.mean + s.sigma * y;
        out[static_cast<std::size_t>(i)].assign(x.data(), x.data() + s.n);
    }
    return out;
}

bool CmaEs::tell(const std::vector<int>& ranking) {
    Impl& s = *impl_;
    if (static_cast<int>(ranking.size()) < s.mu)
        throw ConfigError("CMA-ES tell: ranking shorter than mu");
    if (s.last_y.empty()) throw ConfigError("CMA-ES tell called before ask");

    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(s.n);
    for (int i = 0; i < s.mu; ++i) {
        int idx = ranking[static_cast<std::size_t>(i)];
        if (idx < 0 || idx >= s.lambda) throw ConfigError("CMA-ES tell: ranking index out of range");
        y_w += s.weights[i] * s.last_y[static_cast<std::size_t>(idx)];
    }
    s.mean += s.sigma * y_w;

    // C^(-1/2) y_w via the eigendecomposition used for the last ask.
    Eigen::VectorXd c_inv_sqrt_yw = s.B * (s.B.transpose() * y_w).cwiseQuotient(s.D);
    s.p_sigma = (1.0 - s.c_sigma) * s.p_sigma +
                std::sqrt(s.c_sigma * (2.0 - s.c_sigma) * s.mueff) * c_inv_sqrt_yw;

    double ps_norm = s.p_sigma.norm();
    double expected = std::sqrt(1.0 - std::pow(1.0 - s.c_sigma, 2.0 * static_cast<double>(s.gen + 1)));
    bool hsig = ps_norm / expected / s.chi_n < 1.4 + 2.0 / (s.n + 1.0);

    s.p_c = (1.0 - s.c_c) * s.p_c +
            (hsig ? std::sqrt(s.c_c * (2.0 - s.c_c) * s.mueff) : 0.0) * y_w;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(s.n, s.n);
    for (int i = 0; i < s.mu; ++i) {
        const Eigen::VectorXd& y = s.last_y[static_cast<std::size_t>(ranking[static_cast<std::size_t>(i)])];
        rank_mu += s.weights[i] * (y * y.transpose());
    }
    double hsig_correction = hsig ? 0.0 : s.c_c * (2.0 - s.c_c);
    s.C = (1.0 - s.c_1 - s.c_mu) * s.C +
          s.c_1 * (s.p_c * s.p_c.transpose() + hsig_correction * s.C) +
          s.c_mu * rank_mu;
    s.C = 0.5 * (s.C + s.C.transpose().eval());

    double arg = s.c_sigma / s.d_sigma * (ps_norm / s.chi_n - 1.0);
    s.sigma *= std::exp(std::min(1.0, arg));
    ++s.gen;

    if (!std::isfinite(s.sigma) || s.sigma < 1e-8 || s.sigma > 1e8) s.healthy = false;
    if (!s.mean.allFinite() || !s.C.allFinite()) s.healthy = false;
    s.last_y.clear();  // the batch is consumed; a second tell needs a new ask
    return s.healthy;
}

int CmaEs::dim() const { return impl_->n; }
int CmaEs::lambda() const { return impl_->lambda; }
double CmaEs::sigma() const { return impl_->sigma; }
std::vector<double> CmaEs::mean() const {
    return {impl_->mean.data(), impl_->mean.data() + impl_->n};
}
long CmaEs::generation() const { return impl_->gen; }

}  // namespace qd
