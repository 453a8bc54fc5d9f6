#pragma once

#include <string>

#include "jetham/document.hpp"
#include "jetham/error.hpp"
#include "jetham/model.hpp"

namespace jetham::cli {

/// A library error raised while running a task, tagged with the task.
class TaskError : public Error {
 public:
  TaskError(std::string task, const std::string& message)
      : Error("task '" + task + "': " + message), task_(std::move(task)) {}

  const std::string& task() const noexcept { return task_; }

 private:
  std::string task_;
};

/// Runs the model's tasks in order, one result per task.
OutputDocument run_tasks(const ModelFile& model);

/// Every property the model supports: the listed check-closed and legendre
/// tasks, and the built-in checks for the declared Hamiltonian, Lagrangian,
/// sections and connections.
OutputDocument run_checks(const ModelFile& model);

}  // namespace jetham::cli
