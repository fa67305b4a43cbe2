#include "distill/prompts.hpp"

#include <initializer_list>
#include <utility>

#include "distill/error.hpp"

namespace distill {

namespace {

constexpr std::string_view kBoxedClause =
    " Make sure to put the answer (and only answer) inside \\boxed{}.";

constexpr std::string_view kMathInstruction = "Solve the following math problem.";

constexpr std::string_view kDefaultJudge =
    "You will be given a Question, a User Answer (only its ending is shown due to length), "
    "and a Ground Truth.\n"
    "Your task is not to answer the question, but to say if the user answer is equivalent "
    "in meaning to the ground truth.\n"
    "\n"
    "First, extract the final result from both the User Answer and the Ground Truth Answer, "
    "based on the Question.\n"
    "Then, compare the two final results and determine whether they convey the same meaning.\n"
    "If they are equivalent, respond with \\boxed{yes}.\n"
    "If they are not equivalent, or if the User Answer does not contain a valid answer, "
    "respond with \\boxed{no}.\n"
    "\n"
    "Question:\n"
    "{question}\n"
    "\n"
    "User Answer:\n"
    "{answer}\n"
    "\n"
    "Ground Truth:\n"
    "{truth}";

constexpr std::string_view kIfevalJudge =
    "You will be given an Instruction and a User Answer (only its ending is shown due to "
    "length).\n"
    "Your task is not to answer the Instruction, but to determine whether the User Answer "
    "follows all the formal requirements stated in the Instruction.\n"
    "If the User Answer contains a thinking process, you should ignore it and only focus on "
    "the final answer.\n"
    "\n"
    "First, identify every explicit requirement in the Instruction (e.g., no commas, maximum "
    "word count, required word occurrences, formatting rules).\n"
    "Then, compare the User Answer against these requirements.\n"
    "If all requirements are satisfied, respond with \\boxed{yes}.\n"
    "If any requirement is violated, respond with \\boxed{no}.\n"
    "\n"
    "Question:\n"
    "{question}\n"
    "\n"
    "User Answer:\n"
    "{answer}";

using Slot = std::pair<std::string_view, std::string_view>;

// Single left-to-right pass, so substituted text is never re-expanded.
std::string fill(std::string_view tmpl, std::initializer_list<Slot> slots) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    bool replaced = false;
    if (tmpl[i] == '{') {
      for (const auto& [name, value] : slots) {
        if (tmpl.substr(i + 1, name.size()) == name &&
            tmpl.substr(i + 1 + name.size(), 1) == "}") {
          out += value;
          i += name.size() + 2;
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out += tmpl[i++];
  }
  return out;
}

}  // namespace

std::string_view eval_instruction(Benchmark b) {
  static const std::string winogrande =
      "Given a sentence with a blank (_) and two possible options, choose the option that "
      "correctly fills the blank so that the sentence makes the most logical sense." +
      std::string(kBoxedClause);
  static const std::string openbookqa =
      "Select the option that best completes the scenario based on everyday reasoning about "
      "cause and effect." +
      std::string(kBoxedClause);
  static const std::string span_reading =
      "Read the passage and answer the question by selecting the text span from the passage "
      "that best answers it." +
      std::string(kBoxedClause);
  static const std::string mmlu_misc =
      "Answer the following multiple-choice question by selecting the option that best fits "
      "the correct knowledge." +
      std::string(kBoxedClause);
  static const std::string math = std::string(kMathInstruction) + std::string(kBoxedClause);
  static const std::string ifeval = "Answer the following instruction.";

  switch (b) {
    case Benchmark::winogrande: return winogrande;
    case Benchmark::openbookqa: return openbookqa;
    case Benchmark::squad:
    case Benchmark::coqa:
      return span_reading;
    case Benchmark::mmlu_misc: return mmlu_misc;
    case Benchmark::ifeval: return ifeval;
    case Benchmark::gsm8k:
    case Benchmark::math_500:
    case Benchmark::aime:
    case Benchmark::mmlu_math:
    case Benchmark::mmlu_pro_math:
    case Benchmark::aqua_rat:
      return math;
  }
  return ifeval;
}

std::string render_eval_prompt(Benchmark b, std::string_view question,
                               std::span<const Shot> shots) {
  std::string out(eval_instruction(b));
  out += "\n\n";
  if (shots.empty()) {
    out += question;
    return out;
  }
  for (const auto& shot : shots) {
    out += "Question: ";
    out += shot.question;
    out += "\nAnswer: ";
    out += shot.answer;
    out += "\n\n";
  }
  out += "Question: ";
  out += question;
  out += "\nAnswer:";
  return out;
}

std::string render_eval_prompt(std::string_view benchmark, std::string_view question,
                               std::span<const Shot> shots) {
  return render_eval_prompt(parse_benchmark(benchmark), question, shots);
}

std::string answer_tail(std::string_view text, std::size_t max_chars) {
  std::size_t pos = text.size();
  std::size_t chars = 0;
  while (pos > 0 && chars < max_chars) {
    --pos;
    // Step over UTF-8 continuation bytes (10xxxxxx).
    while (pos > 0 && (static_cast<unsigned char>(text[pos]) & 0xC0) == 0x80) --pos;
    ++chars;
  }
  return std::string(text.substr(pos));
}

std::string render_judge_prompt(Benchmark b, std::string_view question,
                                std::string_view response,
                                const std::optional<std::string>& truth,
                                std::size_t tail_chars) {
  const std::string tail = answer_tail(response, tail_chars);
  if (b == Benchmark::ifeval) {
    return fill(kIfevalJudge, {{"question", question}, {"answer", tail}});
  }
  if (!truth) throw Error(Errc::MissingGroundTruth, std::string(to_string(b)));
  return fill(kDefaultJudge, {{"question", question}, {"answer", tail}, {"truth", *truth}});
}

}  // namespace distill
