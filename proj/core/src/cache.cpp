namespace mulab {
}  // namespace mulab
