#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "linklogic/train.hpp"

namespace linklogic {

// Flat key=value document ('#' starts a comment, blank lines skipped).
// Malformed lines raise ConfigError naming origin and line number.
std::map<std::string, std::string> parse_kv_config(const std::string& text,
                                                   const std::string& origin);

// Applies one training-config entry. Keys use the trainer's external spelling
// (model_name, batch_size, neg_sample_size, hidden_dim, lr, max_step,
// batch_size_eval, neg_adversarial_sampling, regularization_coef, seed,
// log_every); unknown keys and unparseable values raise ConfigError naming
// them. model_name must be ComplEx; batch_size_eval is accepted and ignored.
void apply_training_entry(TrainingConfig& config, const std::string& key,
                          const std::string& value);

nlohmann::json training_config_to_json(const TrainingConfig& config);

// Entry point behind main: args exclude the program name. Returns the process
// exit code (0 ok, 1 runtime error, 2 bad input or unknown name, 3 bad
// config/usage).
int run_cli(const std::vector<std::string>& args);

}  // namespace linklogic
