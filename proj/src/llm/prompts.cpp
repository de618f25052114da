#include "eotf/llm/prompts.hpp"

#include <cstdio>

namespace eotf::llm {

namespace {

constexpr std::string_view kPreamble = R"PROMPT(You are an expert in Exploratory Landscape Analysis (ELA), advanced optimization benchmarks, and high-dimensional function design.
Your task is to generate a single, synthetic benchmark function in Python for testing global optimization algorithms.

The primary goal is to create a function whose ELA features closely match the target values provided below.

Target Normalized ELA Features:
(These are the values the generated function's landscape should ideally exhibit)
{ela_features}

ELA Feature Descriptions:
- ela_meta.lin_simple.adj_r2: Adjusted R^2 of a linear model. High values suggest linearity.
- ela_meta.lin_w_interact.adj_r2: Adjusted R^2 of a linear model with pairwise interactions.
- ela_meta.quad_simple.adj_r2: Adjusted R^2 of a quadratic model without interactions.
- ela_meta.quad_w_interact.adj_r2: Adjusted R^2 of a full quadratic model.
- ela_distr.skewness: Skewness of the objective value distribution.
- nbc.nb_fitness.cor: Correlation between fitness and nearest-better connectivity.
- nbc.nn_nb.sd_ratio: Ratio of standard deviations (nearest neighbor distance / nearest-better distance).
- fitness_distance.fitness_std: Standard deviation of objective values.

Implementation Requirements:
1. Language & Libraries: Implement the function in Python, using only NumPy for mathematical operations.
2. Function Signature:
   ```python
   def problem(x: np.ndarray) -> float:
       # Docstring goes here
       pass
   ```
   Your code MUST BE included in a markdown code block.
3. Input: x is a 1D NumPy array of shape (N,).
4. Domain: The function should be designed considering the domain [-5, 5]^N. Ensure operations are valid within this domain.
5. Docstring: Include a concise docstring explaining the mathematical structure of the function. If possible, include the formula. Be specific about the components used.
6. Self-Contained Code: The final output block should only contain the necessary import (import numpy as np) and the function definition.
7. The function must be deterministic: Do not use np.random or any stochastic elements.)PROMPT";

constexpr std::string_view kE1 = R"PROMPT({I1}

History:
You already generated these functions:
{context}

Instructions:
Please help me create a new function that has a totally different form from the given ones.)PROMPT";

constexpr std::string_view kE2 = R"PROMPT({I1}

History:
You already generated these functions:
{context}

Instructions:
Please help me create a new function that has a totally different form from the given ones but can be motivated from them. Firstly, identify the common backbone idea in the provided functions. Secondly, based on the backbone idea create a new solution.)PROMPT";

constexpr std::string_view kM1 = R"PROMPT({I1}

Generated Function:
You already generated this function:
{context}

Instructions:
Please assist me in creating a new function that has a different form but can be a modified version of the function provided.)PROMPT";

constexpr std::string_view kM2 = R"PROMPT({I1}

Generated Function:
You already generated this function:
{context}

Instructions:
Please identify the main parameters of the generated function and assist me in creating a new version of the function with improved parameter settings.)PROMPT";

constexpr std::string_view kM3 = R"PROMPT({I1}

Generated Function:
You already generated this function:
{context}

Instructions:
First, you need to identify the main components in the function above. Next, analyze whether any of these components can be overfit to the specific sample of points used to calculate ELA features. Then, based on your analysis, simplify the components to enhance the generalization to other samples.)PROMPT";

constexpr std::string_view kContract = R"(8. Accepted Subset: The function body may only contain assignments to new names followed by one return statement. Expressions may use numeric literals, x, x[i] with a non-negative integer index, the operators + - * / ** and unary minus, the NumPy calls np.sin, np.cos, np.tan, np.tanh, np.exp, np.log, np.sqrt, np.abs, np.floor, np.sum, np.prod, np.mean, np.min, np.max and np.linalg.norm, and the builtins min(a, b) and max(a, b) on scalars. Loops, conditionals, comprehensions, slicing, keyword arguments and any other calls or imports are rejected. The return value must be a scalar.)";

void replace_all(std::string& s, std::string_view from, std::string_view to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
}

}  // namespace

std::string_view kind_name(PromptKind kind) noexcept {
    switch (kind) {
        case PromptKind::I1: return "I1";
        case PromptKind::E1: return "E1";
        case PromptKind::E2: return "E2";
        case PromptKind::M1: return "M1";
        case PromptKind::M2: return "M2";
        case PromptKind::M3: return "M3";
    }
    return "";
}

std::optional<PromptKind> kind_from_name(std::string_view name) noexcept {
    for (PromptKind k : {PromptKind::I1, PromptKind::E1, PromptKind::E2, PromptKind::M1, PromptKind::M2,
                         PromptKind::M3})
        if (kind_name(k) == name) return k;
    return std::nullopt;
}

bool is_exploration(PromptKind kind) noexcept { return kind == PromptKind::E1 || kind == PromptKind::E2; }

bool is_mutation(PromptKind kind) noexcept {
    return kind == PromptKind::M1 || kind == PromptKind::M2 || kind == PromptKind::M3;
}

std::string_view preamble_template() noexcept { return kPreamble; }

std::string_view operator_template(PromptKind kind) noexcept {
    switch (kind) {
        case PromptKind::I1: return "{I1}";
        case PromptKind::E1: return kE1;
        case PromptKind::E2: return kE2;
        case PromptKind::M1: return kM1;
        case PromptKind::M2: return kM2;
        case PromptKind::M3: return kM3;
    }
    return "";
}

std::string_view instruction_text(PromptKind kind) noexcept {
    if (kind == PromptKind::I1) return {};
    const std::string_view t = operator_template(kind);
    constexpr std::string_view marker = "Instructions:\n";
    return t.substr(t.find(marker) + marker.size());
}

std::string_view output_contract() noexcept { return kContract; }

std::string format_features(const ela::NormalizedVector& target) {
    std::string out;
    for (std::size_t i = 0; i < ela::kFeatureCount; ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", target.values[i]);
        if (i) out += '\n';
        out += "- ";
        out += ela::kFeatureNames[i];
        out += ": ";
        out += target.defined[i] ? buf : "undefined";
    }
    return out;
}

std::string render_prompt(PromptKind kind, const ela::NormalizedVector& target,
                          const std::vector<std::string>& context) {
    const std::size_t n = context.size();
    if (kind == PromptKind::I1 && n != 0) throw ArityError("I1 takes no context, got " + std::to_string(n));
    if (is_exploration(kind) && n == 0)
        throw ArityError(std::string(kind_name(kind)) + " needs at least one context function");
    if (is_mutation(kind) && n != 1)
        throw ArityError(std::string(kind_name(kind)) + " needs exactly one parent, got " + std::to_string(n));

    std::string preamble(kPreamble);
    replace_all(preamble, "{ela_features}", format_features(target));
    preamble += '\n';
    preamble += kContract;

    std::string ctx;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) ctx += "\n\n";
        ctx += "```python\n";
        ctx += context[i];
        if (!context[i].empty() && context[i].back() != '\n') ctx += '\n';
        ctx += "```";
    }

    std::string out(operator_template(kind));
    replace_all(out, "{context}", ctx);
    replace_all(out, "{I1}", preamble);
    return out;
}

}  // namespace eotf::llm
