// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "enigmatom/answer.hpp"
#include "enigmatom/complexity.hpp"
#include "enigmatom/evaluate.hpp"
#include "enigmatom/oracle.hpp"
#include "enigmatom/pipeline.hpp"
#include "enigmatom/remote_backend.hpp"
#include "enigmatom/scene_graph.hpp"
#include "enigmatom/worldgen.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace enigmatom;

namespace {

using Clock = std::chrono::steady_clock;

std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(ENIGMATOM_FIXTURES) / name; }

Story load(const std::string& name) { return parse_story(read_text_file(fixture(name))); }

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects failure descriptions; the first few are printed under the verdict.
struct Check {
    std::vector<std::string> failures;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string join(const std::vector<int>& v) {
    std::string out;
    for (int i : v) out += (out.empty() ? "" : ",") + std::to_string(i);
    return out;
}

void criterion_melon(Check& c) {
    const auto t0 = Clock::now();
    const auto s = load("melon.txt");
    const auto q = parse_question("Where does Emma think Lily thinks William thinks the melon is?", s);
    const auto full = run_pipeline(s, q, PipelineConfig{});
    PipelineConfig unmasked;
    unmasked.apply_masking = false;
    const auto first = run_pipeline(s, parse_question("Where does William think the melon is?", s), unmasked);
    const double elapsed = seconds_since(t0);

    // Relevant events share the omniscient room of the melon's declaration.
    std::vector<int> relevant;
    const auto analysis = Pipeline(PipelineConfig{}).analyze(s, std::vector<ToMQuestion>{q});
    const auto& omni = analysis.graphs.omniscient;
    for (int i : full.view.surviving) {
        if (omni.at(i) && omni.at(i) == omni.at(2)) relevant.push_back(i);
    }
    c.expect(relevant == std::vector<int>{1, 2, 3, 4, 5, 6, 7}, "melon-relevant surviving events " + join(relevant));
    c.expect(full.asked.raw == "Where does William think the melon is?", "reduced question '" + full.asked.raw + "'");
    c.expect(full.predicted == "blue pantry", "masked answer '" + full.predicted + "'");
    c.expect(first.predicted == "red bucket", "unmasked answer '" + first.predicted + "'");
    c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
    char buf[160];
    std::snprintf(buf, sizeof buf, "surviving {%s}, answer %s, unmasked %s, %.3f s", join(full.view.surviving).c_str(),
                  full.predicted.c_str(), first.predicted.c_str(), elapsed);
    c.detail = buf;
}

struct OracleRun {
    int stories = 0;
    int questions = 0;
    int characters_checked = 0;
    double seconds = 0;
};

// Every chain of distinct characters up to `order`, outermost first.
void for_each_chain(const std::vector<CharacterId>& cs, int order, const std::function<void(const BeliefChain&)>& f) {
    std::vector<CharacterId> cur;
    std::function<void()> rec = [&]() {
        if (!cur.empty()) f(BeliefChain(cur));
        if (static_cast<int>(cur.size()) == order) return;
        for (const auto& ch : cs) {
            if (std::find(cur.begin(), cur.end(), ch) != cur.end()) continue;
            cur.push_back(ch);
            rec();
            cur.pop_back();
        }
    };
    rec();
}

void criteria_oracle(Check& equiv, Check& paths) {
    OracleRun run;
    const auto t0 = Clock::now();
    const Pipeline pipeline{PipelineConfig{}};
    std::uint64_t seed = 10'000;
    for (int m = 2; m <= 5; ++m) {
        for (int k = 1; k <= std::min(4, m); ++k) {
            for (bool reentry : {false, true}) {
                const int count = 40;
                GrammarConfig cfg;
                cfg.num_characters = m;
                cfg.max_order = k;
                cfg.allow_reentry = reentry;
                cfg.num_rooms = 1 + static_cast<int>(seed % 2);
                cfg.num_objects = cfg.num_rooms + static_cast<int>(seed % 3);
                cfg.moves_per_room = 1 + static_cast<int>(seed % 3);
                cfg.seed = seed;
                seed += static_cast<std::uint64_t>(count);
                for (const auto& gs : generate_batch(cfg, count)) {
                    const Story& s = gs.story;
                    ++run.stories;
                    std::vector<ToMQuestion> qs;
                    std::set<std::string> objects;
                    for (const auto& g : gs.questions) {
                        qs.push_back(g.question);
                        objects.insert(g.question.target_entity);
                    }
                    for (const auto& obj : objects) {
                        for_each_chain(s.characters, std::min(k, 2), [&](const BeliefChain& ch) {
                            ToMQuestion q;
                            q.chain = ch;
                            q.target_entity = obj;
                            q.raw = render_question(q);
                            qs.push_back(q);
                        });
                        ToMQuestion real;
                        real.target_entity = obj;
                        real.form = QuestionForm::Reality;
                        real.raw = render_question(real);
                        qs.push_back(real);
                    }
                    const auto analysis = pipeline.analyze(s, qs);
                    for (const auto& q : qs) {
                        ++run.questions;
                        std::string want;
                        if (q.form == QuestionForm::Initial) {
                            want = oracle::initial_container(s, q.target_entity).value_or("");
                        } else {
                            want = oracle::simulate_beliefs(s, q.chain, q.target_entity);
                        }
                        std::string got;
                        try {
                            got = pipeline.answer(s, q, analysis).predicted;
                        } catch (const std::exception& e) {
                            got = std::string("error: ") + e.what();
                        }
                        equiv.expect(got == want, "seed " + std::to_string(s.metadata["config"]["seed"].get<std::uint64_t>()) +
                                                      " '" + q.raw + "': pipeline '" + got + "' oracle '" + want + "'");
                    }
                    for (const auto& ch : s.characters) {
                        ++run.characters_checked;
                        const auto obs = oracle::observed_set(s, ch);
                        const auto got = analysis.graphs.by_character.at(ch.key()).surviving();
                        paths.expect(std::vector<int>(obs.begin(), obs.end()) == got,
                                     "seed " + std::to_string(s.metadata["config"]["seed"].get<std::uint64_t>()) + " " +
                                         ch.name() + ": observed {" + join({obs.begin(), obs.end()}) + "} graph {" +
                                         join(got) + "}");
                    }
                }
            }
        }
    }
    run.seconds = seconds_since(t0);
    equiv.expect(run.stories >= 1000, "only " + std::to_string(run.stories) + " stories");
    equiv.expect(run.seconds < 60.0, "runtime " + std::to_string(run.seconds) + " s");
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d stories, %d questions, %zu mismatches, %.2f s", run.stories, run.questions,
                  equiv.failures.size(), run.seconds);
    equiv.detail = buf;
    std::snprintf(buf, sizeof buf, "%d character graphs, %zu disagreements", run.characters_checked, paths.failures.size());
    paths.detail = buf;
}

std::set<int> nonnull(const SceneGraph& g) {
    std::set<int> out;
    for (int i = 1; i <= g.size(); ++i) {
        if (g.at(i)) out.insert(i);
    }
    return out;
}

void criterion_masking(Check& c) {
    std::mt19937_64 rng(20'240'601);
    const std::vector<std::string> rooms{"porch", "kitchen", "cellar", "attic"};
    auto random_graph = [&](int n) {
        std::vector<LocationNode> a;
        for (int i = 0; i < n; ++i) {
            const auto r = rng() % 5;
            a.push_back(r == 4 ? LocationNode{} : LocationNode{rooms[r]});
        }
        return SceneGraph(std::move(a));
    };
    const int trials = 10'000;
    for (int t = 0; t < trials; ++t) {
        const int n = 1 + static_cast<int>(rng() % 30);
        const auto g = random_graph(n);
        const auto gc = random_graph(n);
        const auto m = mask(g, gc);
        const auto sg = nonnull(g);
        const auto sc = nonnull(gc);
        const auto sm = nonnull(m);
        std::set<int> inter;
        std::set_intersection(sg.begin(), sg.end(), sc.begin(), sc.end(), std::inserter(inter, inter.begin()));
        c.expect(sm == inter, "trial " + std::to_string(t) + ": surviving set is not the intersection");
        c.expect(std::includes(sg.begin(), sg.end(), sm.begin(), sm.end()), "trial " + std::to_string(t) + ": no shrinkage");
        for (int i : sm) c.expect(m.at(i) == g.at(i), "trial " + std::to_string(t) + ": node changed by masking");
        c.expect(mask(m, gc) == m, "trial " + std::to_string(t) + ": not idempotent");

        std::vector<SceneGraph> chain;
        const int len = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < len; ++i) chain.push_back(random_graph(n));
        const auto folded = mask_chain(g, chain);
        auto shuffled = chain;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        c.expect(folded.surviving() == mask_chain(g, shuffled).surviving(),
                 "trial " + std::to_string(t) + ": surviving set depends on chain order");
        c.expect(mask_chain(g, {}) == g, "trial " + std::to_string(t) + ": empty chain is not the identity");
    }
    c.detail = std::to_string(trials) + " random graph pairs and chains";
}

void criterion_complexity(Check& c) {
    const auto rows = complexity_report({5, 5}, {1, 5});
    const std::uint64_t want[] = {5, 25, 85, 205, 325};
    std::string got;
    c.expect(rows.size() == 5, "row count " + std::to_string(rows.size()));
    for (std::size_t i = 0; i < rows.size() && i < 5; ++i) {
        // Independent evaluation of sum_{j=1..k} 5!/(5-j)!.
        std::uint64_t sum = 0;
        std::uint64_t perm = 1;
        for (int j = 1; j <= rows[i].k; ++j) {
            perm *= static_cast<std::uint64_t>(5 - j + 1);
            sum += perm;
        }
        c.expect(rows[i].counts.symbolic_tom == want[i] && sum == want[i],
                 "k=" + std::to_string(rows[i].k) + " symbolic_tom " + std::to_string(rows[i].counts.symbolic_tom));
        c.expect(rows[i].counts.enigma == 6, "k=" + std::to_string(rows[i].k) + " enigma " +
                                                 std::to_string(rows[i].counts.enigma));
        got += (got.empty() ? "" : ", ") + std::to_string(rows[i].counts.symbolic_tom);
    }
    c.detail = "symbolic_tom (" + got + ") vs enigma 6";
}

void criterion_injection(Check& c) {
    const auto s = load("tomi.txt");
    std::vector<ToMQuestion> qs;
    for (const char* text : {"Where will Abigail search for the t-shirt?",
                             "Where does Benjamin think that Abigail searches for the t-shirt?",
                             "Where does Abigail think that Benjamin searches for the t-shirt?"}) {
        qs.push_back(parse_question(text, s));
    }
    const auto analysis = Pipeline(PipelineConfig{}).analyze(s, qs);
    const auto& events = analysis.events;
    c.expect(events.size() == 11, "event count " + std::to_string(events.size()));
    if (events.size() != 11) return;
    const auto& e7 = events[6].injected;
    c.expect(e7.size() == 3, "event 7 has " + std::to_string(e7.size()) + " bullets");
    c.expect(std::any_of(e7.begin(), e7.end(),
                         [](const std::string& b) { return lower(b) == "location of t-shirt becomes in basket"; }),
             "event 7 lacks the t-shirt location bullet");
    for (int i : {1, 2, 3, 6, 9, 10, 11}) {
        c.expect(events[static_cast<std::size_t>(i - 1)].injected.empty(), "event " + std::to_string(i) + " has bullets");
    }
    for (const auto& e : events) {
        for (const auto& b : e.injected) {
            for (const auto& ch : s.characters) {
                c.expect(lower(b).rfind("location of " + ch.key() + " ", 0) != 0,
                         "character bullet on event " + std::to_string(e.index) + ": " + b);
            }
        }
    }
    std::string bullets;
    for (const auto& b : e7) bullets += (bullets.empty() ? "" : "; ") + b;
    c.detail = "event 7: " + bullets;
}

void criterion_ablation(Check& c) {
    std::vector<DatasetItem> items;
    std::size_t count = 0;
    GrammarConfig cfg;
    cfg.seed = 77'000;
    cfg.questions_per_order = 2;
    while (count < 500) {
        cfg.num_characters = 2 + static_cast<int>(cfg.seed % 4);
        cfg.max_order = std::min(cfg.num_characters, 1 + static_cast<int>(cfg.seed % 4));
        cfg.allow_reentry = cfg.seed % 2 == 1;
        const auto gs = generate_story(cfg);
        ++cfg.seed;
        DatasetItem item{gs.story, {}};
        for (const auto& g : gs.questions) {
            if (g.question.order() < 1 || count >= 500) continue;
            const auto reality = oracle::simulate_beliefs(gs.story, {}, g.question.target_entity);
            if (g.gold == reality) continue;
            item.questions.push_back({g.question.raw, g.question.order(), g.gold});
            ++count;
        }
        if (!item.questions.empty()) items.push_back(std::move(item));
    }
    auto accuracy = [&](PipelineConfig pc) {
        const Pipeline p(pc);
        EvalOptions opts;
        opts.workers = 4;
        return evaluate(items, p, opts);
    };
    PipelineConfig no_im;
    no_im.apply_masking = false;
    PipelineConfig no_ki;
    no_ki.inject_knowledge = false;
    const auto full = accuracy(PipelineConfig{});
    const auto im = accuracy(no_im);
    const auto ki = accuracy(no_ki);
    c.expect(full.outcomes.size() == 500, "full run scored " + std::to_string(full.outcomes.size()) + " questions");
    c.expect(full.mean_accuracy == 1.0, "full accuracy " + std::to_string(full.mean_accuracy));
    c.expect(im.mean_accuracy < full.mean_accuracy, "--no-im accuracy " + std::to_string(im.mean_accuracy));
    c.expect(ki.mean_accuracy == full.mean_accuracy, "--no-ki accuracy " + std::to_string(ki.mean_accuracy));
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu questions: full %.4f, --no-im %.4f, --no-ki %.4f", full.outcomes.size(),
                  full.mean_accuracy, im.mean_accuracy, ki.mean_accuracy);
    c.detail = buf;
}

void criterion_parsing(Check& c) {
    const auto cases = nlohmann::json::parse(read_text_file(fixture("answer_parsing.json")));
    c.expect(cases.size() == 30, "fixture has " + std::to_string(cases.size()) + " cases");
    std::size_t agree = 0;
    for (const auto& k : cases) {
        const auto input = k["input"].get<std::string>();
        ParsedAnswer got;
        if (k.contains("candidates")) {
            const auto cands = k["candidates"].get<std::vector<std::string>>();
            got = parse_answer(input, std::span<const std::string>(cands));
        } else {
            got = parse_answer(input);
        }
        const auto& e = k["expected"];
        const bool ok = got.text == e["text"].get<std::string>() && got.tagged == e["tagged"].get<bool>() &&
                        got.unclosed == e["unclosed"].get<bool>() && got.no_tags == e["no_tags"].get<bool>() &&
                        got.matched == e["matched"].get<bool>() && got.ambiguous == e["ambiguous"].get<bool>();
        c.expect(ok, k["name"].get<std::string>() + ": got '" + got.text + "'");
        if (ok) ++agree;
    }
    c.detail = std::to_string(agree) + "/" + std::to_string(cases.size()) + " cases agree";
}

bool report(int n, const char* title, const Check& c) {
    const bool pass = c.failures.empty();
    std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", n, title, c.detail.c_str());
    for (std::size_t i = 0; i < c.failures.size() && i < 10; ++i) std::printf("       %s\n", c.failures[i].c_str());
    if (c.failures.size() > 10) std::printf("       ... %zu more\n", c.failures.size() - 10);
    return pass;
}

template <typename F>
Check guarded(F&& f) {
    Check c;
    try {
        f(c);
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("exception: ") + e.what());
    }
    return c;
}

}  // namespace

int main() {
    bool ok = true;
    ok &= report(1, "melon worked example", guarded(criterion_melon));
    Check equiv;
    Check paths;
    try {
        criteria_oracle(equiv, paths);
    } catch (const std::exception& e) {
        equiv.failures.push_back(std::string("exception: ") + e.what());
        paths.failures.push_back("not run");
    }
    ok &= report(2, "oracle equivalence", equiv);
    ok &= report(3, "observation-path agreement", paths);
    ok &= report(4, "masking algebra", guarded(criterion_masking));
    ok &= report(5, "complexity table", guarded(criterion_complexity));
    ok &= report(6, "injection fidelity", guarded(criterion_injection));
    ok &= report(7, "ablation direction", guarded(criterion_ablation));
    ok &= report(8, "answer parsing", guarded(criterion_parsing));
    std::printf("%s\n", ok ? "all criteria passed" : "some criteria failed");
    return ok ? 0 : 1;
}
