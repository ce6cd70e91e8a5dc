#include <gtest/gtest.h>

#include <cmath>
#include <regex>
#include <set>

#include "aac/data/audio.hpp"
#include "aac/data/corpus.hpp"
#include "aac/experiment/config.hpp"
#include "aac/experiment/early_stopping.hpp"
#include "aac/experiment/evaluate.hpp"
#include "aac/experiment/grid.hpp"
#include "aac/experiment/report.hpp"
#include "aac/experiment/suite.hpp"
#include "aac/experiment/trainer.hpp"
#include "aac/io/bytes.hpp"
#include "fixtures.hpp"

namespace aac {
namespace {

using testing::TempDir;

std::vector<double> values(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

// ---------------------------------------------------------------- grid

TEST(Grid, FullGridHas264Settings) {
  const auto grid = enumerate_grid(desk_profile());
  EXPECT_EQ(grid.size(), 264u);
  std::set<std::string> ids;
  for (const auto& c : grid) ids.insert(c.setting_id());
  EXPECT_EQ(ids.size(), 264u);
}

TEST(Grid, OneEncoderHas66) {
  EXPECT_EQ(enumerate_grid(desk_profile(), GridFilter::parse("encoder=openl3")).size(), 66u);
}

TEST(Grid, BertOnlyHas24AllFixed) {
  const auto grid = enumerate_grid(desk_profile(), GridFilter::parse("word_source=bert_static"));
  EXPECT_EQ(grid.size(), 24u);
  for (const auto& c : grid) EXPECT_FALSE(c.fine_tune);
}

TEST(Grid, DeterministicOrderAndIdFormat) {
  const auto a = enumerate_grid(paper_profile());
  const auto b = enumerate_grid(paper_profile());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].setting_id(), b[i].setting_id());
  EXPECT_EQ(a.front().setting_id(), "vggish-none-identity-w2v-fixed");
  EXPECT_EQ(a.back().setting_id(), "coala-half-mha-bert_static-fixed");
  for (const auto& c : a) {
    EXPECT_NO_THROW(c.validate()) << c.setting_id();
    EXPECT_EQ(c.decoder.model_width, 512u);
  }
}

TEST(Grid, FilterCombinations) {
  EXPECT_EQ(enumerate_grid(desk_profile(), GridFilter::parse("encoder=vggish|yamnet, overlap=half")).size(), 66u);
  EXPECT_EQ(enumerate_grid(desk_profile(), GridFilter::parse("fine_tune=true")).size(), 4u * 2 * 3 * 5);
  EXPECT_EQ(enumerate_grid(desk_profile(), GridFilter::parse("adapter=mlp,fine_tune=fixed,words=glove")).size(), 8u);
  EXPECT_EQ(enumerate_grid(desk_profile(), GridFilter::parse("")).size(), 264u);
  EXPECT_THROW(GridFilter::parse("colour=red"), std::invalid_argument);
  EXPECT_THROW(GridFilter::parse("encoder"), std::invalid_argument);
  EXPECT_THROW(GridFilter::parse("encoder=whisper"), std::invalid_argument);
  EXPECT_THROW(GridFilter::parse("encoder=vggish|"), std::invalid_argument);
}

// ---------------------------------------------------------------- config

TEST(Config, BertRejectsFineTuning) {
  ExperimentConfig c = desk_profile();
  c.word_source = WordSource::bert_static;
  c.fine_tune = true;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.fine_tune = false;
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, InvariantsChecked) {
  ExperimentConfig c = desk_profile();
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = desk_profile();
  c.patience = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = desk_profile();
  c.adapter.kind = AdapterKind::mha;
  c.adapter.head_dim = 8;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Config, ProfileValues) {
  const auto p = paper_profile();
  EXPECT_EQ(p.batch_size, 256u);
  EXPECT_EQ(p.decoder.model_width, 512u);
  EXPECT_EQ(p.decoder.heads, 4u);
  EXPECT_EQ(p.decoder.head_dim, 128u);
  EXPECT_EQ(p.decoder.num_blocks, 3u);
  EXPECT_EQ(p.patience, 10u);
  EXPECT_EQ(p.adapter.hidden, 256u);
  EXPECT_DOUBLE_EQ(p.optimizer.alpha, 0.001);
  EXPECT_DOUBLE_EQ(p.optimizer.beta1, 0.9);
  EXPECT_DOUBLE_EQ(p.optimizer.beta2, 0.999);
  EXPECT_DOUBLE_EQ(p.optimizer.epsilon, 1e-8);
  const auto d = desk_profile();
  EXPECT_EQ(d.batch_size, 16u);
  EXPECT_EQ(d.decoder.model_width, 64u);
  EXPECT_EQ(d.max_epochs, 200u);
}

TEST(Config, ProfileFilesMatchBuiltIns) {
  for (const char* name : {"desk", "paper"}) {
    const auto path = std::filesystem::path(AAC_SOURCE_DIR) / "profiles" / (std::string(name) + ".json");
    const auto from_file = load_experiment_config(path);
    EXPECT_EQ(nlohmann::json(from_file), nlohmann::json(named_profile(name))) << path;
  }
}

TEST(Config, JsonRoundTripAndOverrides) {
  ExperimentConfig c = paper_profile();
  c.encoder_id = EncoderId::coala;
  c.overlap = Overlap::half;
  c.adapter.kind = AdapterKind::mha;
  c.word_source = WordSource::cbow_clotho;
  c.fine_tune = true;
  c.seed = 77;
  const auto back = nlohmann::json(c).get<ExperimentConfig>();
  EXPECT_EQ(nlohmann::json(back), nlohmann::json(c));

  const auto j = nlohmann::json::parse(R"({"profile": "paper", "adapter": "mlp", "decoder": {"num_blocks": 1}, "batch_size": 8})");
  const auto o = j.get<ExperimentConfig>();
  EXPECT_EQ(o.adapter.kind, AdapterKind::mlp);
  EXPECT_EQ(o.decoder.num_blocks, 1u);
  EXPECT_EQ(o.decoder.model_width, 512u);
  EXPECT_EQ(o.batch_size, 8u);
  EXPECT_THROW(nlohmann::json::parse(R"({"profile": "huge"})").get<ExperimentConfig>(), std::invalid_argument);
  EXPECT_THROW(nlohmann::json::parse(R"({"word_source": "elmo"})").get<ExperimentConfig>(), std::invalid_argument);
}

TEST(Config, RelativeDataDirResolvesAgainstFile) {
  TempDir dir("cfg");
  io::write_file(dir.path() / "sub" / "c.json", R"({"data_dir": "corpus"})");
  EXPECT_EQ(load_experiment_config(dir.path() / "sub" / "c.json").data_dir, dir.path() / "sub" / "corpus");
  io::write_file(dir.path() / "bad.json", "{not json");
  EXPECT_THROW(load_experiment_config(dir.path() / "bad.json"), std::invalid_argument);
}

// ---------------------------------------------------------------- early stopping

std::pair<std::size_t, std::size_t> run_script(const std::vector<double>& losses, std::size_t patience,
                                               std::size_t max_epochs) {
  TrainState s(patience, max_epochs);
  for (double l : losses) {
    if (s.record(l).stop) break;
    EXPECT_LE(s.epochs_since_improvement(), patience);
  }
  return {s.epoch(), s.best_epoch()};
}

TEST(EarlyStopping, ThreeImprovementsThenFlat) {
  std::vector<double> losses{3.0, 2.0, 1.0};
  losses.resize(40, 1.0);
  EXPECT_EQ(run_script(losses, 10, 200), (std::pair<std::size_t, std::size_t>{13, 3}));
}

TEST(EarlyStopping, TiesDoNotResetPatience) {
  std::vector<double> losses{1.0, 2.0, 1.0, 1.0, 0.999};
  losses.resize(30, 5.0);
  EXPECT_EQ(run_script(losses, 3, 200), (std::pair<std::size_t, std::size_t>{4, 1}));
}

TEST(EarlyStopping, MaxEpochsBinds) {
  EXPECT_EQ(run_script({5.0, 4.0, 3.0}, 10, 1), (std::pair<std::size_t, std::size_t>{1, 1}));
  std::vector<double> improving;
  for (int i = 0; i < 50; ++i) improving.push_back(100.0 - i);
  EXPECT_EQ(run_script(improving, 10, 20), (std::pair<std::size_t, std::size_t>{20, 20}));
}

TEST(EarlyStopping, LateImprovementExtends) {
  std::vector<double> losses{1.0, 1.0, 1.0, 0.5};
  losses.resize(30, 0.7);
  EXPECT_EQ(run_script(losses, 3, 200), (std::pair<std::size_t, std::size_t>{7, 4}));
}

TEST(EarlyStopping, RecordAfterStopIsAnError) {
  TrainState s(1, 1);
  EXPECT_TRUE(s.record(1.0).stop);
  EXPECT_THROW(s.record(0.5), std::logic_error);
  EXPECT_THROW(TrainState(0, 5), std::invalid_argument);
}

// ---------------------------------------------------------------- training fixture

class CorpusTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("corpus");
    SyntheticOptions options;
    options.clips = 12;
    write_synthetic_corpus(dir_->path(), make_synthetic_corpus(3, options), 3, {EncoderSpec::mock(16, 1.0)});
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  static ExperimentConfig small_config() {
    ExperimentConfig c = desk_profile();
    c.encoder_id = EncoderId::mock;
    c.adapter.kind = AdapterKind::mlp;
    c.adapter.hidden = 8;
    c.adapter.heads = 2;
    c.adapter.head_dim = 8;
    c.decoder.num_blocks = 1;
    c.decoder.heads = 2;
    c.decoder.head_dim = 8;
    c.decoder.model_width = 16;
    c.decoder.max_caption_len = 12;
    c.random_word_dim = 8;
    c.batch_size = 8;
    c.max_epochs = 3;
    c.patience = 2;
    c.optimizer.alpha = 0.01;
    c.data_dir = dir_->path();
    return c;
  }

  static TempDir* dir_;
};

TempDir* CorpusTest::dir_ = nullptr;

TEST_F(CorpusTest, OneEpochCap) {
  ExperimentConfig c = small_config();
  c.max_epochs = 1;
  c.patience = 10;
  const auto data = load_training_data(c);
  const auto result = run_training(c, data);
  ASSERT_EQ(result.log.size(), 1u);
  EXPECT_EQ(result.best_epoch, 1u);
}

TEST_F(CorpusTest, SameSeedSameLog) {
  const ExperimentConfig c = small_config();
  const auto data = load_training_data(c);
  const auto a = run_training(c, data);
  const auto b = run_training(c, data);
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(a.log[i].train_loss, b.log[i].train_loss);
    EXPECT_EQ(a.log[i].validation_loss, b.log[i].validation_loss);
  }
  ExperimentConfig other = c;
  other.seed = 2;
  EXPECT_NE(run_training(other, data).log[0].train_loss, a.log[0].train_loss);
}

TEST_F(CorpusTest, BestCheckpointIsRestored) {
  ExperimentConfig c = small_config();
  c.max_epochs = 6;
  c.patience = 6;
  const auto data = load_training_data(c);
  std::vector<EpochLog> seen;
  const auto result = run_training(c, data, [&](const EpochLog& e) { seen.push_back(e); });
  EXPECT_EQ(seen.size(), result.log.size());
  double best = INFINITY;
  for (const auto& e : result.log) best = std::min(best, e.validation_loss);
  EXPECT_EQ(result.best_validation_loss, best);
  EXPECT_EQ(result.log[result.best_epoch - 1].validation_loss, best);
  EXPECT_EQ(dataset_loss(result.model, data.validation, data.embeddings, c.decoder.max_caption_len), best);
  EXPECT_LE(result.log.size(), result.best_epoch + c.patience);
}

TEST_F(CorpusTest, EmptyTrainSplitIsAnError) {
  const ExperimentConfig c = small_config();
  auto data = load_training_data(c);
  data.train.clear();
  EXPECT_THROW(run_training(c, data), std::runtime_error);
}

TEST_F(CorpusTest, NonFiniteLossAborts) {
  const ExperimentConfig c = small_config();
  auto data = load_training_data(c);
  std::map<std::string, Tensor> poisoned;
  for (const auto& ex : data.train) {
    Tensor z = data.embeddings.at(ex.clip_id).clone();
    z.mutable_data()[0] = NAN;
    poisoned[ex.clip_id] = z;
  }
  for (const auto& ex : data.validation) poisoned.emplace(ex.clip_id, data.embeddings.at(ex.clip_id));
  data.embeddings = EmbeddingStore::from_map(poisoned);
  try {
    run_training(c, data);
    FAIL() << "expected an abort";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("non-finite"), std::string::npos) << e.what();
  }
}

TEST_F(CorpusTest, VocabularyIgnoresOtherSplits) {
  TempDir copy("leak");
  std::filesystem::copy(dir_->path(), copy.path(), std::filesystem::copy_options::recursive);
  ExperimentConfig c = small_config();
  c.data_dir = copy.path();
  const auto before = load_training_data(c).vocab.tokens();
  std::filesystem::remove(CorpusLayout{copy.path()}.captions(Split::evaluation));
  CaptionDataset val = read_caption_csv(CorpusLayout{copy.path()}.captions(Split::validation), Split::validation);
  for (auto& clip : val.clips) clip.captions[0] = "an entirely novel validation phrase";
  write_caption_csv(CorpusLayout{copy.path()}.captions(Split::validation), val);
  EXPECT_EQ(load_training_data(c).vocab.tokens(), before);
}

TEST_F(CorpusTest, MissingEmbeddingsAreListed) {
  ExperimentConfig c = small_config();
  c.encoder_id = EncoderId::vggish;  // not written for this corpus
  try {
    load_training_data(c);
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("synth_0000.wav"), std::string::npos) << e.what();
  }
}

TEST_F(CorpusTest, FrozenTableUnchangedFineTunedTableMoves) {
  for (bool ft : {false, true}) {
    ExperimentConfig c = small_config();
    c.word_source = WordSource::glove;
    c.fine_tune = ft;
    c.max_epochs = 1;
    const auto data = load_training_data(c);
    const auto table = build_word_table(c, data.vocab, CorpusLayout{c.data_dir});
    const auto before = values(table.rows);
    CaptionModel model = build_model(c, data.vocab, data.embeddings.feature_dim(), table);
    const auto trained = run_training(c, model, data);
    if (ft) {
      EXPECT_NE(values(model.table().rows), before);
    } else {
      EXPECT_EQ(values(model.table().rows), before);
      EXPECT_EQ(values(trained.model.table().rows), before);
    }
  }
}

TEST_F(CorpusTest, EvaluateVerbatimReferencesScoresTen) {
  SyntheticOptions options;
  options.clips = 20;
  options.grammar.paraphrases = 1;
  const auto corpus = make_synthetic_corpus(4, options);
  std::vector<TokenSequence> verbatim;
  for (const auto& clip : corpus.evaluation.clips) verbatim.push_back(tokenize_caption(clip.captions[0]));
  const auto result = score_captions(corpus.evaluation, verbatim, "s", 1);
  EXPECT_EQ(result.report.per_example.size(), corpus.evaluation.clips.size());
  EXPECT_NEAR(result.report.corpus_cider_d, 10.0, 1e-6);
}

TEST_F(CorpusTest, EvaluateEndOnlyModelScoresZero) {
  const ExperimentConfig c = small_config();
  const auto data = load_training_data(c);
  CaptionModel model =
      build_model(c, data.vocab, data.embeddings.feature_dim(), build_word_table(c, data.vocab, CorpusLayout{c.data_dir}));
  Tensor bias = model.decoder().output.bias;
  bias.mutable_data()[Vocabulary::kEnd] = 1e6;
  const CorpusLayout layout{c.data_dir};
  const auto evaluation = read_caption_csv(layout.captions(Split::evaluation), Split::evaluation);
  const auto store = EmbeddingStore::load(layout, c.encoder_id, c.overlap, {&evaluation});
  const auto result = evaluate_model(model, evaluation, data.vocab, store, c.setting_id(), c.seed);
  EXPECT_EQ(result.report.per_example.size(), evaluation.clips.size());
  EXPECT_EQ(result.report.corpus_cider_d, 0.0);
  for (const auto& cand : result.candidates) EXPECT_EQ(cand, "");

  const auto partial = EmbeddingStore::from_map({});
  try {
    evaluate_model(model, evaluation, data.vocab, partial);
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    for (const auto& clip : evaluation.clips) EXPECT_NE(std::string(e.what()).find(clip.clip_id), std::string::npos);
  }
}

TEST_F(CorpusTest, SuiteRunsEverySettingAndSeed) {
  ExperimentConfig base = small_config();
  base.max_epochs = 2;
  auto settings = enumerate_grid(base, GridFilter::parse("adapter=mlp,word_source=random,fine_tune=true,encoder=vggish"));
  ASSERT_EQ(settings.size(), 2u);
  for (auto& s : settings) s.encoder_id = EncoderId::mock;
  SuiteOptions options;
  options.seeds = {1, 2, 3};
  std::size_t callbacks = 0;
  options.on_run = [&](const RunOutcome&) { ++callbacks; };
  const auto result = run_suite(settings, options, default_contrasts(settings));
  EXPECT_EQ(result.runs.size(), 6u);
  EXPECT_EQ(callbacks, 6u);
  EXPECT_EQ(result.summaries.size(), 2u);
  EXPECT_FALSE(result.has_failures());
  for (std::size_t i = 1; i < result.runs.size(); ++i)
    EXPECT_LE(std::tie(result.runs[i - 1].setting_id, result.runs[i - 1].seed),
              std::tie(result.runs[i].setting_id, result.runs[i].seed));
  ASSERT_EQ(result.contrasts.size(), 1u);
  EXPECT_EQ(result.contrasts[0].name, "overlap_half_vs_none:mock");
  EXPECT_EQ(result.contrasts[0].differences, 3u);
  // A model this small may tie across overlap modes; otherwise the test is exact.
  if (result.contrasts[0].significance) {
    EXPECT_LE(result.contrasts[0].significance->n_effective, 3u);
    EXPECT_EQ(result.contrasts[0].significance->method, WilcoxonMethod::exact);
  } else {
    EXPECT_EQ(result.contrasts[0].note, "all differences are zero");
  }
}

TEST_F(CorpusTest, SuiteRecordsFailuresAndContinues) {
  ExperimentConfig good = small_config();
  good.max_epochs = 1;
  ExperimentConfig bad = good;
  bad.encoder_id = EncoderId::yamnet;  // no files for this encoder
  SuiteOptions options;
  options.seeds = {1, 2};
  options.jobs = 2;
  const auto result = run_suite({good, bad}, options);
  EXPECT_TRUE(result.has_failures());
  std::size_t ok = 0;
  for (const auto& r : result.runs) {
    if (r.ok()) {
      ++ok;
    } else {
      EXPECT_NE(r.error.find("missing"), std::string::npos);
    }
  }
  EXPECT_EQ(ok, 2u);
  EXPECT_EQ(result.summaries.size(), 1u);
  EXPECT_NE(format_outcome_csv(result.runs).find("failed"), std::string::npos);
}

TEST_F(CorpusTest, SuiteSavesCheckpoints) {
  ExperimentConfig c = small_config();
  c.max_epochs = 1;
  TempDir out("ckpt");
  SuiteOptions options;
  options.seeds = {5};
  options.checkpoint_dir = out.path();
  run_suite({c}, options);
  EXPECT_TRUE(std::filesystem::exists(out.path() / c.setting_id() / "seed_5.aack"));
}

// ---------------------------------------------------------------- suite scheduling

RunOutcome fake_run(const ExperimentConfig& c) {
  RunOutcome r;
  if (c.seed == 99) throw std::runtime_error("boom");
  r.cider_d = static_cast<double>(c.seed) * 0.1 + (c.overlap == Overlap::half ? 0.05 * static_cast<double>(c.seed) : 0.0);
  return r;
}

TEST(Suite, ParallelismDoesNotChangeOutputs) {
  const auto settings = enumerate_grid(desk_profile(), GridFilter::parse("encoder=vggish,adapter=mlp"));
  SuiteOptions one;
  one.seeds = {1, 2, 3, 4};
  SuiteOptions four = one;
  four.jobs = 4;
  const auto contrasts = default_contrasts(settings);
  const auto a = run_suite_with(settings, one, contrasts, fake_run);
  const auto b = run_suite_with(settings, four, contrasts, fake_run);
  EXPECT_EQ(format_summary_csv(a.summaries), format_summary_csv(b.summaries));
  EXPECT_EQ(format_contrast_csv(a.contrasts), format_contrast_csv(b.contrasts));
  EXPECT_EQ(a.runs.size(), 22u * 4);
}

TEST(Suite, DefaultContrasts) {
  const auto settings = enumerate_grid(desk_profile(), GridFilter::parse("encoder=vggish|coala,adapter=mlp"));
  const auto contrasts = default_contrasts(settings);
  // Two overlap contrasts (one per encoder) and five fine-tuning contrasts.
  ASSERT_EQ(contrasts.size(), 7u);
  std::size_t overlap_pairs = 0;
  for (const auto& c : contrasts)
    if (c.name.rfind("overlap", 0) == 0) overlap_pairs += c.pairs.size();
  EXPECT_EQ(overlap_pairs, 22u);
  SuiteOptions options;
  options.seeds = {1, 2, 3};
  const auto result = run_suite_with(settings, options, contrasts, fake_run);
  for (const auto& c : result.contrasts) {
    if (c.name.rfind("overlap", 0) == 0) {
      ASSERT_TRUE(c.significance);
      EXPECT_EQ(c.significance->n_effective, 33u);
      EXPECT_EQ(c.significance->method, WilcoxonMethod::normal_approx);
    } else {
      EXPECT_FALSE(c.significance);
      EXPECT_EQ(c.note, "all differences are zero");
    }
  }
}

TEST(Suite, SmallContrastUsesExactTest) {
  const auto settings = enumerate_grid(desk_profile(), GridFilter::parse("encoder=yamnet,adapter=mha,words=w2v,ft=fixed"));
  ASSERT_EQ(settings.size(), 2u);
  SuiteOptions options;
  options.seeds = {1, 2, 3};
  const auto result = run_suite_with(settings, options, default_contrasts(settings), fake_run);
  ASSERT_EQ(result.contrasts.size(), 1u);
  ASSERT_TRUE(result.contrasts[0].significance);
  const auto& s = *result.contrasts[0].significance;
  EXPECT_EQ(s.method, WilcoxonMethod::exact);
  EXPECT_EQ(s.n_effective, 3u);
  EXPECT_DOUBLE_EQ(s.w_plus, 6.0);
  EXPECT_DOUBLE_EQ(s.p_one_sided, 0.125);
}

TEST(Suite, FailingRunIsRecorded) {
  SuiteOptions options;
  options.seeds = {1, 99};
  const auto result = run_suite_with({desk_profile()}, options, {}, fake_run);
  EXPECT_TRUE(result.has_failures());
  EXPECT_EQ(result.runs[1].error, "boom");
  EXPECT_EQ(result.summaries.size(), 1u);
  EXPECT_THROW(run_suite_with({desk_profile()}, SuiteOptions{}, {}, fake_run), std::invalid_argument);
}

TEST(Suite, SeedLists) {
  EXPECT_EQ(parse_seed_list("1..10").size(), 10u);
  EXPECT_EQ(parse_seed_list("3,1..2,7"), (std::vector<std::uint64_t>{1, 2, 3, 7}));
  EXPECT_THROW(parse_seed_list("1..3,2"), std::invalid_argument);
  EXPECT_THROW(parse_seed_list("5..1"), std::invalid_argument);
  EXPECT_THROW(parse_seed_list("x"), std::invalid_argument);
  EXPECT_THROW(parse_seed_list(""), std::invalid_argument);
}

// ---------------------------------------------------------------- report

TEST(Report, OneSettingThreeSeeds) {
  TempDir out("report");
  const std::vector<RunScore> runs{{"vggish-half-mlp-glove-ft", 3, 0.3}, {"vggish-half-mlp-glove-ft", 1, 0.1},
                                   {"vggish-half-mlp-glove-ft", 2, 0.2}};
  const auto files = write_report(runs, out.path());
  const std::string summary = io::read_file(out.path() / files.summary_csv);
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 2);
  ASSERT_EQ(files.boxplots.size(), 1u);
  EXPECT_EQ(files.boxplots[0], std::filesystem::path("boxplots") / "vggish-mlp.svg");
  const std::string runs_csv = io::read_file(out.path() / files.runs_csv);
  EXPECT_LT(runs_csv.find(",1,"), runs_csv.find(",2,"));
}

TEST(Report, OneBoxPerSettingInGroup) {
  TempDir out("report_boxes");
  std::vector<RunScore> runs;
  for (const char* id : {"yamnet-none-mha-w2v-fixed", "yamnet-half-mha-w2v-fixed", "yamnet-half-mha-glove-ft",
                         "coala-none-mha-w2v-fixed", "custom"})
    for (std::uint64_t s = 1; s <= 2; ++s) runs.push_back({id, s, 0.1 * static_cast<double>(s)});
  const auto files = write_report(runs, out.path());
  ASSERT_EQ(files.boxplots.size(), 3u);
  const std::string svg = io::read_file(out.path() / "boxplots" / "yamnet-mha.svg");
  const std::regex box("<g class=\"box\"");
  EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), box), std::sregex_iterator()), 3);
  EXPECT_TRUE(std::filesystem::exists(out.path() / "boxplots" / "other.svg"));
}

TEST(Report, RegenerationIsByteIdentical) {
  TempDir a("report_a"), b("report_b");
  const std::vector<RunScore> runs{{"x-none-mlp-w2v-ft", 2, 1.5}, {"x-none-mlp-w2v-ft", 1, 0.25}};
  write_report(runs, a.path());
  write_report(parse_run_csv(io::read_file(a.path() / "runs.csv")), b.path());
  for (const char* f : {"summary.csv", "runs.csv", "boxplots/x-mlp.svg"})
    EXPECT_EQ(io::read_file(a.path() / f), io::read_file(b.path() / f)) << f;
}

TEST(Report, Errors) {
  TempDir out("report_err");
  EXPECT_THROW(write_report({}, out.path()), std::invalid_argument);
  io::write_file(out.path() / "blocker", "file");
  EXPECT_THROW(write_report({{"a", 1, 0.1}}, out.path() / "blocker" / "sub"), std::exception);
}

}  // namespace
}  // namespace aac
