#include "gradient_suite.hpp"

#include "aac/model/layers.hpp"
#include "aac/numerics/ops.hpp"
#include "aac/numerics/rng.hpp"
#include "fixtures.hpp"

namespace aac::testing {

namespace {

GradCheckReport elementwise() {
  Tensor a = random_leaf({3, 4}, 1), b = random_leaf({3, 4}, 2);
  return check_gradients([&] { return sum(mul(add(a, b), sub(a, scale(b, 0.5)))); }, {a, b});
}

GradCheckReport relu_case() {
  Tensor a = random_leaf({4, 5}, 3);
  const Tensor w = random_leaf({4, 5}, 4, false);
  return check_gradients([&] { return sum(mul(relu(a), w)); }, {a});
}

GradCheckReport matmul_transpose() {
  Tensor a = random_leaf({3, 4}, 5), b = random_leaf({4, 2}, 6);
  const Tensor w = random_leaf({2, 3}, 7, false);
  return check_gradients([&] { return sum(mul(transpose(matmul(a, b)), w)); }, {a, b});
}

GradCheckReport add_row() {
  Tensor x = random_leaf({3, 4}, 8), r = random_leaf({4}, 9);
  const Tensor w = random_leaf({3, 4}, 10, false);
  return check_gradients([&] { return sum(mul(add_row_vector(x, r), w)); }, {x, r});
}

GradCheckReport slice_concat_gather() {
  Tensor x = random_leaf({4, 5}, 11), y = random_leaf({4, 2}, 12);
  const std::vector<std::size_t> idx{3, 0, 3, 1};
  const Tensor w = random_leaf({8, 3}, 13, false);
  return check_gradients(
      [&] {
        const Tensor parts[] = {slice_cols(x, 1, 2), y};
        const Tensor joined = concat_cols(parts);  // 4 x 4
        const Tensor rows[] = {gather_rows(joined, idx), slice_cols(x, 0, 4)};
        const Tensor stacked = slice_cols(concat_rows(std::span<const Tensor>(rows, 2)), 0, 3);  // 8 x 3
        return sum(mul(stacked, w));
      },
      {x, y});
}

GradCheckReport softmax_case(std::size_t axis) {
  Tensor x = random_leaf({3, 5}, 14);
  const Tensor w = random_leaf({3, 5}, 15, false);
  return check_gradients([&] { return sum(mul(softmax(x, axis), w)); }, {x});
}

GradCheckReport masked_softmax() {
  Tensor x = random_leaf({3, 3}, 16);
  const Tensor w = random_leaf({3, 3}, 17, false);
  const std::vector<bool> allowed{true, false, false, true, true, false, true, true, true};
  return check_gradients([&] { return sum(mul(masked_softmax_rows(x, allowed), w)); }, {x});
}

GradCheckReport layer_norm_case() {
  Tensor x = random_leaf({4, 5}, 18), g = random_leaf({5}, 19), b = random_leaf({5}, 20);
  const Tensor w = random_leaf({4, 5}, 21, false);
  return check_gradients([&] { return sum(mul(layer_norm(x, g, b, 1e-5), w)); }, {x, g, b});
}

GradCheckReport cross_entropy() {
  Tensor logits = random_leaf({4, 5}, 22);
  const std::vector<std::size_t> targets{0, 4, 2, 2};
  return check_gradients([&] { return cross_entropy_masked(logits, targets, {true, false, true, true}); }, {logits});
}

GradCheckReport attention() {
  Rng rng(5);
  const AttentionParams p = AttentionParams::init(4, 3, rng);
  Tensor q = random_leaf({3, 4}, 6), kv = random_leaf({2, 3}, 7);
  const Tensor w = random_leaf({3, 4}, 8, false);
  const auto mask = AttentionMask{3, 2, {true, false, true, true, false, true}};
  std::vector<Tensor> inputs{q, kv, p.query.weight, p.key.weight, p.value.weight, p.output.bias};
  for (auto& t : inputs) t.set_requires_grad(true);
  return check_gradients([&] { return sum(mul(multi_head_attention(p, q, kv, 2, &mask), w)); }, inputs);
}

GradCheckReport end_to_end(AdapterKind kind) {
  TinySpec spec;
  spec.adapter = kind;
  const CaptionModel m = tiny_model(spec);
  const Tensor z = random_leaf({3, spec.feature_dim}, 2, false);
  const std::vector<std::size_t> caption{3, 4, 2};
  std::vector<Tensor> params;
  for (const auto& p : m.parameters()) params.push_back(p.tensor);
  return check_gradients([&] { return m.caption_loss(z, caption, 1); }, params);
}

}  // namespace

std::vector<GradientCase> gradient_suite() {
  return {
      {"elementwise", elementwise},
      {"relu", relu_case},
      {"matmul_transpose", matmul_transpose},
      {"add_row_vector", add_row},
      {"slice_concat_gather", slice_concat_gather},
      {"softmax_axis0", [] { return softmax_case(0); }},
      {"softmax_axis1", [] { return softmax_case(1); }},
      {"masked_softmax", masked_softmax},
      {"layer_norm", layer_norm_case},
      {"cross_entropy", cross_entropy},
      {"attention", attention},
      {"model_identity", [] { return end_to_end(AdapterKind::identity); }},
      {"model_mlp", [] { return end_to_end(AdapterKind::mlp); }},
      {"model_mha", [] { return end_to_end(AdapterKind::mha); }},
  };
}

}  // namespace aac::testing
