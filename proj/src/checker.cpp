#include "qmeq/checker.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "qmeq/errors.hpp"
#include "qmeq/span_basis.hpp"

namespace qmeq {

namespace {

constexpr std::size_t kRoot = std::numeric_limits<std::size_t>::max();

struct Pending {
  ExperimentTrace trace;
  std::size_t parent = kRoot;  // index into the kept images
};

struct KeptImage {
  ExperimentTrace trace;
  BlockHermitian image;
};

Witness make_witness(const KeptImage& kept) {
  return {kept.trace, kept.image.first.trace().real(), -kept.image.second.trace().real()};
}

}  // namespace

const char* to_string(Verdict v) noexcept {
  return v == Verdict::kEquivalent ? "equivalent" : "not-equivalent";
}

std::strong_ordering trace_order(const ExperimentTrace& x, const ExperimentTrace& y) {
  if (auto c = x.length() <=> y.length(); c != 0) return c;
  for (std::size_t i = 0; i < x.length(); ++i) {
    if (auto c = x.inputs[i] <=> y.inputs[i]; c != 0) return c;
    if (auto c = x.outputs[i] <=> y.outputs[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

CheckReport check_equivalence(const QuantumMealyMachine& m1, const QuantumMealyMachine& m2,
                              const ComplexMatrix& rho1, const ComplexMatrix& rho2,
                              const InputBasis& basis, const CheckOptions& options) {
  return check_equivalence(sum_machines(m1, m2), rho1, rho2, basis, options);
}

CheckReport check_equivalence(const MachineSum& msum, const ComplexMatrix& rho1,
                              const ComplexMatrix& rho2, const InputBasis& basis,
                              const CheckOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (basis.dim() != msum.input_dim()) {
    throw DimensionError("input basis of dimension " + std::to_string(basis.dim()) +
                         " for machines with input dimension " + std::to_string(msum.input_dim()));
  }
  if (rho1.rows() != msum.first().state_dim() || rho2.rows() != msum.second().state_dim()) {
    throw DimensionError("initial states do not match the machines' state dimensions");
  }
  const BlockHermitian rho = build_difference_operator(rho1, rho2);

  const std::size_t n_inputs = basis.size();
  const std::size_t n_outcomes = msum.outcome_count();
  std::vector<BlockChannel> channels;
  channels.reserve(n_inputs * n_outcomes);
  for (std::size_t s = 0; s < n_inputs; ++s)
    for (std::size_t x = 0; x < n_outcomes; ++x) channels.emplace_back(msum, x, basis[s]);

  CheckReport report;
  report.ambient_dimension = msum.ambient_dimension();
  report.input_labels = basis.labels();
  report.outcome_labels = msum.first().outcomes();

  SpanBasis<KeptImage> kept(report.ambient_dimension, options.tolerance);
  std::deque<Pending> queue;
  queue.push_back({});

  auto finish = [&](CheckReport& r) {
    r.basis_size = kept.size();
    r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };

  while (!queue.empty()) {
    Pending item = std::move(queue.front());
    queue.pop_front();
    ++report.sequences_examined;

    BlockHermitian image;
    if (item.parent == kRoot) {
      image = rho;
    } else {
      const std::size_t last = item.trace.length() - 1;
      const auto& channel =
          channels[item.trace.inputs[last] * n_outcomes + item.trace.outputs[last]];
      image = channel.apply(kept.originals()[item.parent].image);
    }

    if (options.early_abort && std::abs(image.trace()) > options.tolerance) {
      report.verdict = Verdict::kNotEquivalent;
      report.witness = make_witness({item.trace, image});
      return finish(report);
    }

    const RealVector coords = image.vectorize();
    if (kept.contains(coords).contained) continue;

    const std::size_t index = kept.size();
    kept.add(coords, KeptImage{item.trace, std::move(image)});
    if (kept.size() > report.ambient_dimension) {
      throw std::logic_error("span basis exceeded d1^2 + d2^2");
    }
    for (std::size_t s = 0; s < n_inputs; ++s)
      for (std::size_t x = 0; x < n_outcomes; ++x) {
        Pending child{item.trace, index};
        child.trace.inputs.push_back(s);
        child.trace.outputs.push_back(x);
        queue.push_back(std::move(child));
      }
  }

  report.verdict = Verdict::kEquivalent;
  for (const auto& k : kept.originals()) {
    if (std::abs(k.image.trace()) > options.tolerance) {
      report.verdict = Verdict::kNotEquivalent;
      report.witness = make_witness(k);
      break;
    }
  }
  return finish(report);
}

}  // namespace qmeq
