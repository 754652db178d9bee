#pragma once

#include <map>
#include <string>
#include <vector>

#include "meshpix/restore.hpp"
#include "meshpix/sampling.hpp"

namespace meshpix {

// Layered key=value configuration for the whole pipeline. Precedence:
// built-in defaults < config file < command line (--set, then dedicated
// flags). Unknown keys are rejected; values are validated against the module
// preconditions before anything runs.
class RunConfig {
  public:
    RunConfig();

    void set(const std::string& key, const std::string& value);  // throws InputError
    void load_file(const std::string& path);

    double get_real(const std::string& key) const;
    int get_int(const std::string& key) const;
    const std::string& get_string(const std::string& key) const;

    // Keys whose value differs from the built-in default, "key=value" form.
    std::vector<std::string> overrides() const;

    SamplingConfig sampling() const;
    RestoreConfig restore() const;   // validates method/kernel/scale keys
    double tensor_sigma() const { return get_real("tensor.sigma"); }
    double tensor_kappa() const { return get_real("tensor.kappa"); }
    double tensor_tau() const { return get_real("tensor.tau"); }

    void validate() const;  // full cross-module validation

  private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> defaults_;
};

}  // namespace meshpix
