package main

// Deadlock-free variant of moby#4395: run hands back a channel that an
// anonymous goroutine fills.

type Error struct{}

func run(f func() Error) chan Error {
	ch := make(chan Error)
	go func() {
		ch <- f()
	}()
	return ch
}

func main() {
	err := run(func() Error {
		return Error{}
	})

	<-err
}
