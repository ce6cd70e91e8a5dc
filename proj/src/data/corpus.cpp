#include "aac/data/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "aac/data/text.hpp"
#include "aac/data/word_vectors.hpp"
#include "aac/io/bytes.hpp"

namespace aac {

namespace {

// Sub-stream ids of the corpus seed.
constexpr std::uint64_t kSceneStream = 1;
constexpr std::uint64_t kPrototypeStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kWordVectorStream = 4;

std::string render(std::size_t template_index, const SyntheticGrammar& g, const Scene& s) {
  const std::string& src = g.sources[s.source];
  const std::string& act = g.actions[s.action];
  std::string place = g.places[s.place];
  switch (template_index) {
    case 0: return fmt::format("A {} {} {}.", src, act, place);
    case 1:
      place[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(place[0])));
      return fmt::format("{}, a {} {}.", place, src, act);
    case 2: return fmt::format("The {} {} {}.", src, act, place);
    case 3: return fmt::format("Someone hears a {} that {} {}.", src, act, place);
    default: return fmt::format("There is a {} which {} {}!", src, act, place);
  }
}

std::string clip_stem(const std::string& clip_id) { return std::filesystem::path(clip_id).stem().string(); }

}  // namespace

std::filesystem::path CorpusLayout::captions(Split split) const {
  return root / "captions" / fmt::format("{}.csv", to_string(split));
}

std::filesystem::path CorpusLayout::embedding(EncoderId encoder, Overlap overlap, const std::string& clip_id) const {
  return root / "embeddings" / fmt::format("{}_{}", to_string(encoder), to_string(overlap)) /
         (clip_stem(clip_id) + ".aemb");
}

std::filesystem::path CorpusLayout::word_vectors(WordSource source) const {
  return root / "word_vectors" / fmt::format("{}.txt", to_string(source));
}

SyntheticGrammar SyntheticGrammar::standard() {
  return SyntheticGrammar{
      {"dog", "bird", "car", "child", "machine", "crowd"},
      {"barks", "chirps", "hums", "shouts", "rattles", "whistles"},
      {"nearby", "outside", "in the distance", "indoors"},
      5,
  };
}

std::vector<std::string> SyntheticGrammar::token_set() const {
  std::set<std::string> tokens;
  for (std::size_t t = 0; t < std::min<std::size_t>(paraphrases, kCaptionsPerClip); ++t) {
    for (std::size_t s = 0; s < sources.size(); ++s)
      for (std::size_t a = 0; a < actions.size(); ++a)
        for (std::size_t p = 0; p < places.size(); ++p)
          for (auto& tok : tokenize_caption(render(t, *this, Scene{s, a, p}))) tokens.insert(tok);
  }
  return {tokens.begin(), tokens.end()};
}

const CaptionDataset& SyntheticCorpus::split(Split s) const {
  switch (s) {
    case Split::train: return train;
    case Split::validation: return validation;
    case Split::evaluation: return evaluation;
  }
  throw std::logic_error("unknown split");
}

std::array<std::size_t, 3> synthetic_split_sizes(std::size_t clips) {
  // Weights in half percent: 65 / 17.5 / 17.5.
  constexpr std::array<std::size_t, 3> weights{130, 35, 35};
  std::array<std::size_t, 3> sizes{};
  std::array<std::size_t, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    sizes[i] = clips * weights[i] / 200;
    remainders[i] = clips * weights[i] % 200;
    assigned += sizes[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] != remainders[b] ? remainders[a] > remainders[b] : a > b;
  });
  for (std::size_t k = 0; assigned < clips; ++k, ++assigned) ++sizes[order[k % 3]];
  // Keep every split populated for tiny corpora.
  for (std::size_t i = 0; i < 3 && clips >= 3; ++i) {
    if (sizes[i] > 0) continue;
    const auto donor = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    --sizes[donor];
    ++sizes[i];
  }
  return sizes;
}

SyntheticCorpus make_synthetic_corpus(std::uint64_t seed, const SyntheticOptions& options) {
  const auto& g = options.grammar;
  if (options.clips < 3) throw std::invalid_argument("a synthetic corpus needs at least 3 clips");
  if (g.sources.empty() || g.actions.empty() || g.places.empty()) throw std::invalid_argument("grammar slots must be nonempty");
  if (g.paraphrases == 0 || g.paraphrases > kCaptionsPerClip) throw std::invalid_argument("paraphrases must be in [1, 5]");
  if (options.frames == 0 || options.feature_dim == 0) throw std::invalid_argument("frames and feature_dim must be positive");

  const Rng root(seed);
  Rng scene_rng = root.fork(kSceneStream);
  Rng prototype_rng = root.fork(kPrototypeStream);

  const auto sizes = synthetic_split_sizes(options.clips);
  const std::size_t n_train = sizes[0];

  auto permutation = [&](std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    scene_rng.shuffle(std::span<std::size_t>(p));
    return p;
  };
  const auto perm_source = permutation(g.sources.size());
  const auto perm_action = permutation(g.actions.size());
  const auto perm_place = permutation(g.places.size());

  auto prototypes = [&](std::size_t n) {
    std::vector<std::vector<double>> out(n, std::vector<double>(options.feature_dim));
    for (auto& v : out)
      for (double& x : v) x = prototype_rng.uniform(-1.0, 1.0);
    return out;
  };
  const auto proto_source = prototypes(g.sources.size());
  const auto proto_action = prototypes(g.actions.size());
  const auto proto_place = prototypes(g.places.size());

  SyntheticCorpus corpus;
  for (std::size_t c = 0; c < options.clips; ++c) {
    Scene scene;
    if (c < n_train) {
      scene.source = c < g.sources.size() ? perm_source[c] : scene_rng.index(g.sources.size());
      scene.action = c < g.actions.size() ? perm_action[c] : scene_rng.index(g.actions.size());
      scene.place = c < g.places.size() ? perm_place[c] : scene_rng.index(g.places.size());
    } else {
      scene.source = scene_rng.index(g.sources.size());
      scene.action = scene_rng.index(g.actions.size());
      scene.place = scene_rng.index(g.places.size());
    }

    ClipCaptions clip;
    clip.clip_id = fmt::format("synth_{:04d}.wav", c);
    for (std::size_t i = 0; i < kCaptionsPerClip; ++i) clip.captions[i] = render(i % g.paraphrases, g, scene);

    Rng noise_rng = root.fork(kNoiseStream).fork(c);
    std::vector<double> frames(options.frames * options.feature_dim);
    for (std::size_t t = 0; t < options.frames; ++t)
      for (std::size_t f = 0; f < options.feature_dim; ++f)
        frames[t * options.feature_dim + f] = proto_source[scene.source][f] + proto_action[scene.action][f] +
                                              proto_place[scene.place][f] +
                                              options.noise * noise_rng.uniform(-1.0, 1.0);
    corpus.features[clip.clip_id] =
        FeatureSequence{Tensor::from({options.frames, options.feature_dim}, std::move(frames)), options.frame_rate};
    corpus.scenes[clip.clip_id] = scene;

    auto& target = c < n_train ? corpus.train : (c < n_train + sizes[1] ? corpus.validation : corpus.evaluation);
    target.clips.push_back(std::move(clip));
  }
  return corpus;
}

std::vector<EncoderSpec> synthetic_encoders() {
  return {EncoderSpec::named(EncoderId::vggish), EncoderSpec::named(EncoderId::yamnet),
          EncoderSpec::named(EncoderId::openl3), EncoderSpec::named(EncoderId::coala), EncoderSpec::mock(64, 1.0)};
}

void write_synthetic_corpus(const std::filesystem::path& root, const SyntheticCorpus& corpus, std::uint64_t seed,
                            const std::vector<EncoderSpec>& encoders) {
  const CorpusLayout layout{root};
  for (Split s : {Split::train, Split::validation, Split::evaluation}) write_caption_csv(layout.captions(s), corpus.split(s));

  for (const auto& spec : encoders) {
    // Each encoder gets its own fixed projection so the named encoders differ.
    const std::uint64_t projection_seed = kMockProjectionSeed + static_cast<std::uint64_t>(spec.id);
    for (Overlap overlap : {Overlap::none, Overlap::half}) {
      for (const auto& [clip_id, features] : corpus.features) {
        write_embedding_file(layout.embedding(spec.id, overlap, clip_id),
                             window_embed(features, spec, overlap, projection_seed));
      }
    }
  }

  // Word vectors cover the grammar's token set; reserved tokens fall back to
  // seeded random rows at load time.
  std::set<std::string> token_set;
  for (Split s : {Split::train, Split::validation, Split::evaluation})
    for (const auto& clip : corpus.split(s).clips)
      for (const auto& caption : clip.captions)
        for (auto& tok : tokenize_caption(caption)) token_set.insert(std::move(tok));
  const std::vector<std::string> tokens(token_set.begin(), token_set.end());
  const Rng vector_root = Rng(seed).fork(kWordVectorStream);
  for (WordSource source : {WordSource::w2v, WordSource::glove, WordSource::fasttext, WordSource::cbow_clotho,
                            WordSource::bert_static}) {
    const std::size_t dim = *word_source_dimension(source);
    Rng rng = vector_root.fork(static_cast<std::uint64_t>(source));
    std::vector<double> values(tokens.size() * dim);
    for (double& v : values) v = static_cast<double>(static_cast<float>(rng.uniform(-0.5, 0.5)));
    const bool header = source != WordSource::glove && source != WordSource::bert_static;
    io::write_file(layout.word_vectors(source),
                   format_word_vectors(tokens, Tensor::from({tokens.size(), dim}, std::move(values)), header));
  }

  nlohmann::json manifest{{"seed", seed},
                          {"clips", corpus.train.clips.size() + corpus.validation.clips.size() + corpus.evaluation.clips.size()},
                          {"splits",
                           {{"train", corpus.train.clips.size()},
                            {"validation", corpus.validation.clips.size()},
                            {"evaluation", corpus.evaluation.clips.size()}}}};
  nlohmann::json enc = nlohmann::json::array();
  for (const auto& spec : encoders)
    enc.push_back({{"name", std::string(to_string(spec.id))}, {"dim", spec.embedding_dim}, {"window_seconds", spec.window_seconds}});
  manifest["encoders"] = enc;
  io::write_file(root / "corpus.json", manifest.dump(2) + "\n");
}

}  // namespace aac
