#pragma once

#include <string>
#include <vector>

#include "asymgen/problems.hpp"

namespace asymgen {

struct RenderedProblem {
  std::string question_latex;
  std::string solution_latex;
  std::vector<BoxedAnswer> answers;
};

/// Final answers of a draft, tagged by regime, in the order they appear.
std::vector<BoxedAnswer> boxed_answers(const Draft& d);

/// Question and worked solution following the narrative of the hand-written
/// examples; every final result sits inside \boxed{}. Throws TemplateGap if a
/// solver output has no slot in its template.
RenderedProblem render_record(const Draft& d);

/// Contents of every \boxed{...} span, braces balanced.
std::vector<std::string> boxed_spans(const std::string& latex);

/// Fixed two-decimal text, with "-0.00" normalized to "0.00".
std::string fixed2(double v);

}  // namespace asymgen
