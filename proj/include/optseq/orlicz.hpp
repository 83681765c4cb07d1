#pragma once

#include <memory>
#include <optional>

namespace optseq {

// Orlicz function on [0,1] normalized by N(0) = 0, N(1) = 1.
//
//   Power(p):        N(t) = t^p, p >= 1
//   PowerLog(p, a):  N(t) = t^p log^a(e/t), p > 1 (any a with N nondecreasing),
//                    or p = 1 with a <= 0
//   Conjugate(M):    t -> M~(c t), the Young conjugate of M rescaled so that
//                    the value at 1 is 1.  Evaluated through a cubic spline of
//                    ln M~(c e^x) tabulated on [kConjugateTableFloor, 0],
//                    extrapolated linearly below.
inline constexpr double kConjugateTableFloor = -92.0;  // about ln 1e-40
inline constexpr int kConjugateTablePoints = 4097;

struct ConjugateTable;

class OrliczGenerator {
 public:
  enum class Kind { Power, PowerLog, Conjugate };

  static OrliczGenerator power(double p);
  static OrliczGenerator power_log(double p, double a);
  static OrliczGenerator conjugate_of(const OrliczGenerator& base);

  Kind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  double a() const noexcept { return a_; }
  // Conjugate only.
  const OrliczGenerator& base() const { return *base_; }
  double conjugate_scale() const noexcept { return scale_; }

  // N(t) for t in [0,1].
  double operator()(double t) const;

  // ln N(e^x) for x <= 0.  Exact closed form for Power and PowerLog, so
  // arguments far below the double range of t are fine; numeric otherwise.
  double log_value(double x) const;
  bool has_closed_log() const noexcept { return kind_ != Kind::Conjugate; }

  // N^{-1}(y) for y in (0,1].
  double inverse(double y) const;
  // ln N^{-1}(e^z) for z <= 0.
  double log_inverse(double z) const;

  // Matuszewska-type exponent p with mu = nu = 1/p, when the family fixes it.
  std::optional<double> index_exponent() const;

  bool operator==(const OrliczGenerator& other) const;

 private:
  OrliczGenerator(Kind kind, double p, double a,
                  std::shared_ptr<const OrliczGenerator> base, double scale,
                  std::shared_ptr<const ConjugateTable> table = nullptr)
      : kind_(kind), p_(p), a_(a), base_(std::move(base)), scale_(scale),
        table_(std::move(table)) {}

  Kind kind_;
  double p_ = 1.0;
  double a_ = 0.0;
  std::shared_ptr<const OrliczGenerator> base_;
  double scale_ = 1.0;
  std::shared_ptr<const ConjugateTable> table_;
};

// sup over s in (0,1] of (s t - N(s)), for t in (0,1].  A 10^3-point
// log-spaced scan over [1e-300, 1] brackets the maximizer; golden-section refines it to 1e-10.
double young_conjugate(const OrliczGenerator& n, double t);

// Same supremum for any t >= 0 (used to normalize the conjugate).
double young_conjugate_unchecked(const OrliczGenerator& n, double t);

}  // namespace optseq
