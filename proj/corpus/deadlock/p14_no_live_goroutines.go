// Pattern: P14 NoLiveGoroutines
// Expected: Deadlock
//
// As P13, with two goroutines that both wait for a value that never comes.
package main

import "fmt"

func listen(ch chan int, done chan bool) {
	fmt.Println(<-ch)
	done <- true
}

func main() {
	ch := make(chan int)
	done := make(chan bool)
	go listen(ch, done)
	go listen(ch, done)
	<-done
	<-done
}
