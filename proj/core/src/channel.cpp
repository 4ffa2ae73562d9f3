#include "wtap/channel.hpp"

#include <cmath>

#include "wtap/error.hpp"

namespace wtap {

void validate_kernel(const Kernel& k, const std::string& what) {
  if (k.rows() == 0 || k.cols() == 0) fail(ErrorKind::ShapeMismatch, what + " is empty");
  for (Eigen::Index r = 0; r < k.rows(); ++r) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < k.cols(); ++c) {
      double p = k(r, c);
      if (!std::isfinite(p) || p < kNegativeMassTol)
        fail(ErrorKind::NegativeMass, what + " row " + std::to_string(r) + " has a negative entry");
      s += p;
    }
    if (std::abs(s - 1.0) > kNormTol)
      fail(ErrorKind::NotNormalized, what + " row " + std::to_string(r) + " sums to " +
                                         std::to_string(s));
  }
}

ChannelSpec ChannelSpec::from_joint(VarId input, std::array<VarId, 3> outputs, Kernel joint) {
  std::size_t cols = outputs[0].card * outputs[1].card * outputs[2].card;
  if (static_cast<std::size_t>(joint.rows()) != input.card ||
      static_cast<std::size_t>(joint.cols()) != cols)
    fail(ErrorKind::ShapeMismatch, "joint kernel shape does not match alphabets");
  validate_kernel(joint, "channel kernel");
  ChannelSpec ch;
  ch.input_ = std::move(input);
  ch.outputs_ = std::move(outputs);
  ch.joint_ = std::move(joint);
  return ch;
}

ChannelSpec ChannelSpec::from_cascade(VarId input, std::array<VarId, 3> outputs,
                                      std::array<Kernel, 3> stages) {
  static const char* names[] = {"p(y1|x)", "p(y2|y1)", "p(z|y2)"};
  std::size_t in = input.card;
  for (int s = 0; s < 3; ++s) {
    if (static_cast<std::size_t>(stages[s].rows()) != in)
      fail(ErrorKind::DimensionMismatch, std::string(names[s]) + " has " +
                                             std::to_string(stages[s].rows()) + " rows, expected " +
                                             std::to_string(in));
    if (static_cast<std::size_t>(stages[s].cols()) != outputs[s].card)
      fail(ErrorKind::DimensionMismatch, std::string(names[s]) + " column count mismatch");
    validate_kernel(stages[s], names[s]);
    in = outputs[s].card;
  }
  ChannelSpec ch;
  ch.input_ = std::move(input);
  ch.outputs_ = std::move(outputs);
  ch.cascade_ = std::move(stages);
  ch.degraded_flag = true;
  return ch;
}

Kernel ChannelSpec::marginal(int k) const {
  if (k < 0 || k > 2) fail(ErrorKind::InvalidArgument, "output index out of range");
  if (cascade_) {
    Kernel m = (*cascade_)[0];
    for (int s = 1; s <= k; ++s) m = m * (*cascade_)[s];
    return m;
  }
  const Kernel& j = *joint_;
  std::size_t c1 = outputs_[0].card, c2 = outputs_[1].card, c3 = outputs_[2].card;
  Kernel m = Kernel::Zero(j.rows(), static_cast<Eigen::Index>(outputs_[k].card));
  for (Eigen::Index x = 0; x < j.rows(); ++x)
    for (std::size_t a = 0; a < c1; ++a)
      for (std::size_t b = 0; b < c2; ++b)
        for (std::size_t c = 0; c < c3; ++c) {
          std::size_t col = (a * c2 + b) * c3 + c;
          std::size_t tgt = k == 0 ? a : (k == 1 ? b : c);
          m(x, static_cast<Eigen::Index>(tgt)) += j(x, static_cast<Eigen::Index>(col));
        }
  return m;
}

Kernel ChannelSpec::joint_kernel() const {
  if (joint_) return *joint_;
  std::size_t c1 = outputs_[0].card, c2 = outputs_[1].card, c3 = outputs_[2].card;
  cell_count({input_, outputs_[0], outputs_[1], outputs_[2]});
  const auto& st = *cascade_;
  Kernel j(static_cast<Eigen::Index>(input_.card), static_cast<Eigen::Index>(c1 * c2 * c3));
  for (Eigen::Index x = 0; x < j.rows(); ++x)
    for (std::size_t a = 0; a < c1; ++a)
      for (std::size_t b = 0; b < c2; ++b)
        for (std::size_t c = 0; c < c3; ++c)
          j(x, static_cast<Eigen::Index>((a * c2 + b) * c3 + c)) =
              st[0](x, static_cast<Eigen::Index>(a)) *
              st[1](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
              st[2](static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(c));
  return j;
}

ChannelSpec build_degraded_joint(const Kernel& p_y1_given_x, const Kernel& p_y2_given_y1,
                                 const Kernel& p_z_given_y2) {
  if (p_y2_given_y1.rows() != p_y1_given_x.cols())
    fail(ErrorKind::DimensionMismatch, "p(y2|y1) rows must equal |Y1|");
  if (p_z_given_y2.rows() != p_y2_given_y1.cols())
    fail(ErrorKind::DimensionMismatch, "p(z|y2) rows must equal |Y2|");
  VarId x{"X", static_cast<std::size_t>(p_y1_given_x.rows())};
  std::array<VarId, 3> outs{VarId{"Y1", static_cast<std::size_t>(p_y1_given_x.cols())},
                            VarId{"Y2", static_cast<std::size_t>(p_y2_given_y1.cols())},
                            VarId{"Z", static_cast<std::size_t>(p_z_given_y2.cols())}};
  return ChannelSpec::from_cascade(x, outs, {p_y1_given_x, p_y2_given_y1, p_z_given_y2});
}

ProbTable uniform_input_joint(const ChannelSpec& ch) {
  Kernel j = ch.joint_kernel();
  std::vector<VarId> vars{ch.input(), ch.outputs()[0], ch.outputs()[1], ch.outputs()[2]};
  double px = 1.0 / static_cast<double>(ch.input().card);
  std::vector<double> p(static_cast<std::size_t>(j.size()));
  std::size_t i = 0;
  for (Eigen::Index x = 0; x < j.rows(); ++x)
    for (Eigen::Index c = 0; c < j.cols(); ++c) p[i++] = px * j(x, c);
  return ProbTable(std::move(vars), std::move(p));
}

bool is_degraded(const ChannelSpec& ch, double tol) {
  if (ch.is_cascade()) return true;
  ProbTable t = uniform_input_joint(ch);
  const auto& o = ch.outputs();
  return check_markov(t, {ch.input().name, o[0].name, o[1].name, o[2].name}, tol);
}

ProbTable compose(const ProbTable& aux, const ChannelSpec& ch, const std::vector<int>& outputs) {
  std::size_t xpos = aux.position(ch.input().name);
  if (aux.vars()[xpos].card != ch.input().card)
    fail(ErrorKind::DimensionMismatch, "aux input alphabet differs from channel input");
  std::vector<VarId> vars = aux.vars();
  Kernel kern;
  std::size_t out_cells = 1;
  if (outputs.size() == 1) {
    kern = ch.marginal(outputs[0]);
    vars.push_back(ch.outputs()[static_cast<std::size_t>(outputs[0])]);
  } else if (outputs.size() == 3 && outputs[0] == 0 && outputs[1] == 1 && outputs[2] == 2) {
    kern = ch.joint_kernel();
    for (const auto& o : ch.outputs()) vars.push_back(o);
  } else {
    fail(ErrorKind::InvalidArgument, "compose supports one output or all three in order");
  }
  out_cells = static_cast<std::size_t>(kern.cols());
  cell_count(vars);
  std::size_t stride_x = 1;
  for (std::size_t k = xpos + 1; k < aux.vars().size(); ++k) stride_x *= aux.vars()[k].card;
  std::size_t cx = ch.input().card;
  std::vector<double> p(aux.size() * out_cells);
  for (std::size_t cell = 0; cell < aux.size(); ++cell) {
    auto x = static_cast<Eigen::Index>((cell / stride_x) % cx);
    double pa = aux.probs()[cell];
    for (std::size_t y = 0; y < out_cells; ++y)
      p[cell * out_cells + y] = pa * kern(x, static_cast<Eigen::Index>(y));
  }
  return ProbTable(std::move(vars), std::move(p));
}

Kernel bsc(double crossover) {
  Kernel k(2, 2);
  k << 1.0 - crossover, crossover, crossover, 1.0 - crossover;
  return k;
}

Kernel identity_kernel(std::size_t n) {
  return Kernel::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

Kernel uniform_kernel(std::size_t rows, std::size_t cols) {
  return Kernel::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols),
                          1.0 / static_cast<double>(cols));
}

Kernel random_kernel(std::size_t rows, std::size_t cols, Rng& rng) {
  Kernel k(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < k.rows(); ++r) {
    auto d = rng.dirichlet(cols);
    for (Eigen::Index c = 0; c < k.cols(); ++c) k(r, c) = d[static_cast<std::size_t>(c)];
  }
  return k;
}

}  // namespace wtap
