// Minimal end-to-end run: correct one claim against its evidence using
// scripted generation and entailment backends.

#include <iostream>
#include <map>
#include <memory>

#include <zerofec/zerofec.hpp>

int main() {
  zerofec::CorrectionTask task;
  task.task_id = "demo-1";
  task.claim = "The Eiffel Tower is in Berlin.";
  task.evidence =
      "The Eiffel Tower is a wrought-iron lattice tower on the Champ de Mars "
      "in Paris, France.";

  // A real deployment points these at seq2seq model servers; the demo
  // scripts one question per extracted claim answer and one evidence
  // answer per question.
  auto qg = std::make_shared<zerofec::KeyedGenerator>(
      "qg", std::map<std::string, std::string>{
                {"The Eiffel Tower", "What is in Berlin?"},
                {"Eiffel Tower", "What is in Berlin?"},
                {"Eiffel", "What is in Berlin?"},
                {"Tower", "What is in Berlin?"},
                {"is in Berlin", "Where is the Eiffel Tower?"},
                {"Berlin", "Where is the Eiffel Tower?"},
            });
  auto qa = std::make_shared<zerofec::KeyedGenerator>(
      "qa", std::map<std::string, std::string>{
                {"what is in berlin?", "the Eiffel Tower"},
                {"where is the eiffel tower?", "Paris, France"},
            });
  auto q2c = std::make_shared<zerofec::KeyedGenerator>(
      "q2c",
      std::map<std::string, std::string>{
          {"What is in Berlin?", "The Eiffel Tower is in Berlin."},
          {"Where is the Eiffel Tower?", "The Eiffel Tower is in Paris, France."},
      });
  auto nli = std::make_shared<zerofec::TableEntailment>(
      std::map<std::string, double>{
          {"The Eiffel Tower is in Berlin.", 0.03},
          {"The Eiffel Tower is in Paris, France.", 0.98},
      });

  zerofec::BackendSet backends{qg, qa, q2c, nli};
  zerofec::PipelineConfig config;

  zerofec::CorrectionOutput out = zerofec::run_pipeline(task, backends, config);
  std::cout << "claim:      " << task.claim << "\n";
  std::cout << "correction: " << out.correction << "\n";
  std::cout << "edited:     " << (out.edited ? "yes" : "no") << "\n\n";
  std::cout << "trace:\n" << zerofec::to_json(out).dump(2) << "\n";
  return 0;
}
